#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hullact/activations.hpp"
#include "hullact/data.hpp"
#include "hullact/errors.hpp"
#include "hullact/harness.hpp"
#include "hullact/verify.hpp"

namespace py = pybind11;

namespace {

hullact::HullKind hull_from_name(const std::string& name) {
  if (name == "convex") return hullact::HullKind::Convex;
  if (name == "affine") return hullact::HullKind::Affine;
  throw hullact::ConfigError("hull must be 'convex' or 'affine', got '" +
                             name + "'");
}

hullact::CombinedActivation make_combined(const std::string& hull,
                                          const std::vector<std::string>& bases,
                                          const std::vector<double>& c) {
  hullact::CombinedActivation a;
  a.hull = hull_from_name(hull);
  for (const std::string& name : bases)
    a.bases.push_back(hullact::base_by_name(name));
  a.coefficients = c;
  return a;
}

py::tuple dataset_to_python(const hullact::Dataset& ds) {
  const auto& shape = ds.images.shape();
  py::array_t<double> images(
      std::vector<py::ssize_t>(shape.begin(), shape.end()));
  std::copy(ds.images.data(), ds.images.data() + ds.images.size(),
            images.mutable_data());
  py::array_t<std::int64_t> labels(
      static_cast<py::ssize_t>(ds.labels.size()));
  std::copy(ds.labels.begin(), ds.labels.end(), labels.mutable_data());
  return py::make_tuple(images, labels, ds.num_classes);
}

py::dict record_to_python(const hullact::MetricsRecord& rec) {
  py::dict d;
  d["epoch"] = rec.epoch;
  d["train_loss"] = rec.train_loss;
  d["train_acc"] = rec.train_acc;
  d["test_acc"] = rec.test_acc;
  py::dict coeffs;
  for (const hullact::CoeffSnapshot& snap : rec.coefficients)
    coeffs[snap.layer.c_str()] = snap.coefficients;
  d["coefficients"] = coeffs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Networks with learnable hull-constrained activation functions";

  py::register_exception<hullact::Error>(m, "Error");

  m.def("project_convex", &hullact::project_convex, py::arg("c"),
        "Euclidean projection onto the probability simplex.");
  m.def("project_affine", &hullact::project_affine, py::arg("c"),
        "Euclidean projection onto the sum-to-one hyperplane.");
  m.def("is_in_cone", &hullact::is_in_cone, py::arg("c"),
        "True iff every coefficient is non-negative.");
  m.def(
      "init_coefficients",
      [](std::size_t n, const std::string& hull) {
        return hullact::init_coefficients(n, hull_from_name(hull));
      },
      py::arg("n"), py::arg("hull") = "convex",
      "Uniform coefficient vector (1/n, ..., 1/n).");

  m.def(
      "parse_activation",
      [](const std::string& text) {
        return hullact::parse_activation(text).canonical();
      },
      py::arg("text"),
      "Canonical form of an activation spec string; raises on bad input.");
  m.def(
      "base_value",
      [](const std::string& name, double x) {
        return hullact::base_by_name(name).value(x);
      },
      py::arg("name"), py::arg("x"));
  m.def(
      "base_deriv",
      [](const std::string& name, double x) {
        return hullact::base_by_name(name).deriv(x);
      },
      py::arg("name"), py::arg("x"));
  m.def(
      "eval_combined",
      [](const std::string& hull, const std::vector<std::string>& bases,
         const std::vector<double>& c, const std::vector<double>& xs) {
        hullact::CombinedActivation a = make_combined(hull, bases, c);
        hullact::Tensor out =
            hullact::eval_combined(a, hullact::Tensor::vector(xs));
        return out.values();
      },
      py::arg("hull"), py::arg("bases"), py::arg("coefficients"),
      py::arg("xs"),
      "Elementwise sum_i c_i f_i(x); checks the hull constraints.");

  m.def(
      "verify",
      []() {
        std::ostringstream report;
        std::vector<hullact::PropertyResult> results =
            hullact::run_property_suite(report);
        return py::make_tuple(hullact::all_passed(results), report.str());
      },
      "Runs the full property suite; returns (passed, report).");

  m.def(
      "load_idx",
      [](const std::string& images_path, const std::string& labels_path) {
        return dataset_to_python(hullact::load_idx(images_path, labels_path));
      },
      py::arg("images_path"), py::arg("labels_path"),
      "Parses an IDX image/label file pair; returns (images, labels, "
      "num_classes).");
  m.def(
      "load_fashion_mnist",
      [](const std::string& data_dir, bool train) {
        return dataset_to_python(hullact::load_fashion_mnist(data_dir, train));
      },
      py::arg("data_dir"), py::arg("train") = true);
  m.def(
      "make_synthetic",
      [](std::size_t count, int num_classes, std::size_t height,
         std::size_t width, std::uint64_t seed) {
        return dataset_to_python(
            hullact::make_synthetic(count, num_classes, height, width, seed));
      },
      py::arg("count"), py::arg("num_classes") = 10, py::arg("height") = 28,
      py::arg("width") = 28, py::arg("seed") = 1);

  m.def("preset_names", &hullact::preset_names);
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        hullact::ExperimentConfig config =
            hullact::ExperimentConfig::from_json_text(config_json);
        hullact::ExperimentResult result = hullact::run_experiment(config);
        py::dict out = record_to_python(result.final_record());
        py::list history;
        for (const hullact::MetricsRecord& rec : result.history)
          history.append(record_to_python(rec));
        out["history"] = history;
        return out;
      },
      py::arg("config_json"),
      "Runs one experiment from a JSON config string; returns the final "
      "metrics (with per-epoch history).");
}
