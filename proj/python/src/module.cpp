#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"
#include "tga/oracle.hpp"
#include "tga/report.hpp"
#include "tga/space.hpp"
#include "tga/theorems.hpp"

namespace py = pybind11;
using namespace tga;

namespace {

SpaceSpec make_space(const std::string& descriptor, std::optional<std::size_t> dim) {
  auto norm = parse_norm(descriptor);
  const auto d = dim ? *dim : norm.intrinsic_dim().value_or(0);
  if (d == 0) throw InvalidArgument("dim is required for " + descriptor);
  return SpaceSpec(d, std::move(norm));
}

OracleOptions oracle(const std::string& method) {
  OracleOptions o;
  if (method == "generic") {
    o.method = OracleMethod::generic;
  } else if (method == "fastpath") {
    o.method = OracleMethod::fastpath;
  } else if (method != "automatic") {
    throw InvalidArgument("method must be automatic, generic or fastpath");
  }
  return o;
}

py::dict approx(const ApproxResult<double>& r) {
  py::dict d;
  d["value"] = r.value;
  d["support"] = r.support.indices();
  d["coeffs"] = r.coeffs;
  d["converged"] = r.converged;
  return d;
}

Budget budget(std::size_t samples, std::size_t hillclimb, std::uint64_t seed, const std::string& grid,
              unsigned workers) {
  Budget b;
  const auto level = parse_grid_level(grid);
  if (!level) throw InvalidArgument("grid must be coarse, fine or off");
  b.grid = *level;
  b.samples = samples;
  b.hillclimb_rounds = hillclimb;
  b.seed = seed;
  b.workers = workers;
  return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Greedy-type constants of finite-dimensional normed spaces";
  m.attr("__version__") = TGA_VERSION;

  py::register_exception<SpaceError>(m, "SpaceError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("norm", [](const std::string& space, const std::vector<double>& f) {
    return norm_eval(make_space(space, f.size()), f);
  }, py::arg("space"), py::arg("f"));

  m.def("greedy_ordering", [](const std::vector<double>& f) { return greedy_ordering(f); }, py::arg("f"));
  m.def("greedy_set", [](const std::vector<double>& f, std::size_t k) { return greedy_set(f, k).indices(); },
        py::arg("f"), py::arg("m"));

  m.def("sigma_m", [](const std::string& space, const std::vector<double>& f, std::size_t k,
                      const std::string& method) {
    const auto s = make_space(space, f.size());
    ApproxResult<double> r;
    {
      py::gil_scoped_release release;
      r = sigma_m(s, f, k, oracle(method));
    }
    return approx(r);
  }, py::arg("space"), py::arg("f"), py::arg("m"), py::arg("method") = "automatic");

  m.def("d_m", [](const std::string& space, const std::vector<double>& f, std::size_t k,
                  const std::string& method) {
    return approx(d_m(make_space(space, f.size()), f, k, oracle(method)));
  }, py::arg("space"), py::arg("f"), py::arg("m"), py::arg("method") = "automatic");

  m.def("estimate", [](const std::string& space, std::optional<std::size_t> dim, const std::string& kind,
                       std::size_t samples, std::size_t hillclimb, std::uint64_t seed, const std::string& grid,
                       unsigned workers) {
    const auto k = parse_kind(kind);
    if (!k) throw InvalidArgument("unknown constant kind: " + kind);
    const auto s = make_space(space, dim);
    const auto b = budget(samples, hillclimb, seed, grid, workers);
    std::string out;
    {
      py::gil_scoped_release release;
      out = estimate_to_json(estimate<double>(s, *k, b)).dump();
    }
    return out;
  }, py::arg("space"), py::arg("dim") = py::none(), py::arg("kind") = "C_g", py::arg("samples") = 1000,
     py::arg("hillclimb") = 200, py::arg("seed") = 0, py::arg("grid") = "coarse", py::arg("workers") = 1);

  m.def("verify", [](const std::string& space, std::optional<std::size_t> dim, const std::string& suite,
                     std::size_t samples, std::size_t hillclimb, std::uint64_t seed, const std::string& grid,
                     unsigned workers, const std::vector<std::size_t>& gaps) {
    const auto s = make_space(space, dim);
    const auto b = budget(samples, hillclimb, seed, grid, workers);
    std::string out;
    {
      py::gil_scoped_release release;
      EstimateCache<double> cache(s, b);
      out = verdict_to_json(run_suite(cache, suite, gaps)).dump();
    }
    return out;
  }, py::arg("space"), py::arg("dim") = py::none(), py::arg("suite") = "main", py::arg("samples") = 1000,
     py::arg("hillclimb") = 200, py::arg("seed") = 0, py::arg("grid") = "coarse", py::arg("workers") = 1,
     py::arg("gaps") = std::vector<std::size_t>{});
}
