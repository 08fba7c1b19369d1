#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfcz/check.hpp"
#include "mfcz/czdecomp.hpp"
#include "mfcz/expspan.hpp"
#include "mfcz/multifreq.hpp"
#include "mfcz/report.hpp"
#include "mfcz/signal_io.hpp"
#include "mfcz/variation.hpp"

namespace py = pybind11;
using namespace mfcz;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// 1-d arrays are scalar sequences, 2-d arrays hold one vector per row.
VectorSequence to_sequence(const CArray& a, std::optional<std::vector<std::int64_t>> keys) {
  if (a.ndim() != 1 && a.ndim() != 2) throw py::value_error("values must be 1-d or 2-d");
  const auto len = static_cast<std::size_t>(a.shape(0));
  const std::size_t dim = a.ndim() == 2 ? static_cast<std::size_t>(a.shape(1)) : 1;
  std::vector<Complex> values(a.data(), a.data() + len * dim);
  if (!keys) {
    keys.emplace(len);
    for (std::size_t i = 0; i < len; ++i) (*keys)[i] = static_cast<std::int64_t>(i + 1);
  }
  return VectorSequence(std::move(*keys), std::move(values), dim);
}

SampledSignal to_signal(const CArray& samples, double x0, double dx) {
  if (samples.ndim() != 1) throw py::value_error("samples must be 1-d");
  return SampledSignal(std::vector<Complex>(samples.data(), samples.data() + samples.size()), x0, dx);
}

py::array_t<Complex> to_array(std::span<const Complex> v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<Complex> to_array(const CMatrix& B) {
  py::array_t<Complex> out({B.rows(), B.cols()});
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) out.mutable_at(i, j) = B(i, j);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-frequency Calderon-Zygmund decomposition and variational operators";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "read_signal",
      [](const std::string& path) {
        const SampledSignal f = read_signal_csv(path);
        return py::make_tuple(to_array(f.samples()), f.x0(), f.dx());
      },
      py::arg("path"), "Signal CSV as (samples, x0, dx).");

  m.def(
      "tilde_variation",
      [](const CArray& values, double r, std::optional<std::vector<std::int64_t>> keys) {
        return tilde_variation(to_sequence(values, std::move(keys)), r);
      },
      py::arg("values"), py::arg("r"), py::arg("keys") = py::none());
  m.def(
      "variation",
      [](const CArray& values, double r, std::optional<std::vector<std::int64_t>> keys) {
        return variation(to_sequence(values, std::move(keys)), r);
      },
      py::arg("values"), py::arg("r"), py::arg("keys") = py::none());
  m.def(
      "jump_cover",
      [](const CArray& values, double lam, std::optional<std::vector<std::int64_t>> keys) {
        return jump_cover(to_sequence(values, std::move(keys)), lam).indices;
      },
      py::arg("values"), py::arg("lam"), py::arg("keys") = py::none(),
      "Keys where the greedy lambda-jump cover places its anchors.");
  m.def(
      "rm_block",
      [](std::int64_t l, int mm) {
        const IndexBlock b = rm_block(l, mm);
        return py::make_tuple(b.lo, b.hi);
      },
      py::arg("l"), py::arg("m"));

  m.def(
      "gram",
      [](double a, double b, std::vector<double> xi) { return to_array(gram(Interval(a, b), FrequencySet(std::move(xi)))); },
      py::arg("a"), py::arg("b"), py::arg("xi"));
  m.def(
      "be_ratio",
      [](std::vector<double> xi, double a, double b, int eval_points) {
        return be_ratio(Interval(a, b), FrequencySet(std::move(xi)), eval_points).ratio;
      },
      py::arg("xi"), py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("eval_points") = 4096);

  m.def(
      "cz_decompose_json",
      [](const CArray& samples, double x0, double dx, std::vector<double> xi, double lam) {
        const CzOutput out = cz_decompose(to_signal(samples, x0, dx), FrequencySet(std::move(xi)), lam);
        return cz_to_json(out).dump();
      },
      py::arg("samples"), py::arg("x0"), py::arg("dx"), py::arg("xi"), py::arg("lam"));
  m.def(
      "cz_good_part",
      [](const CArray& samples, double x0, double dx, std::vector<double> xi, double lam) {
        const CzOutput out = cz_decompose(to_signal(samples, x0, dx), FrequencySet(std::move(xi)), lam);
        return py::make_tuple(to_array(out.g.samples()), out.g.x0());
      },
      py::arg("samples"), py::arg("x0"), py::arg("dx"), py::arg("xi"), py::arg("lam"),
      "Good part g on the zero-padded grid, with that grid's left endpoint.");

  m.def(
      "calV",
      [](const CArray& samples, double x0, double dx, std::vector<double> X, int k_lo, int k_hi, double q) {
        const SampledSignal f = to_signal(samples, x0, dx);
        const KRange ks{k_lo, k_hi};
        ks.validate(f);
        const SampledSignal v = calV(f, FrequencySet(std::move(X)), ks, q, MultiplierFamily{});
        py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) out.mutable_at(static_cast<py::ssize_t>(i)) = v[i].real();
        return out;
      },
      py::arg("samples"), py::arg("x0"), py::arg("dx"), py::arg("X"), py::arg("k_lo"), py::arg("k_hi"),
      py::arg("q") = 4.0);
  m.def("D", [](int M) { return MultiplierFamily{}.D(M); }, py::arg("M"));
  m.def(
      "symbol_variation",
      [](double xi, int k_lo, int k_hi, double r) { return symbol_variation(xi, KRange{k_lo, k_hi}, r, MultiplierFamily{}); },
      py::arg("xi"), py::arg("k_lo"), py::arg("k_hi"), py::arg("r"));

  m.def(
      "check",
      [](std::uint64_t seed, int grid_log2) {
        CheckOptions opts;
        opts.grid_log2 = grid_log2;
        py::list out;
        {
          py::gil_scoped_release release;
          const std::vector<PropertyResult> results = run_property_suite(seed, opts);
          py::gil_scoped_acquire acquire;
          for (const PropertyResult& r : results) out.append(py::make_tuple(r.name, r.pass, r.detail));
        }
        return out;
      },
      py::arg("seed") = 1, py::arg("grid_log2") = 12);
}
