#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finsler/causality.hpp"
#include "finsler/config.hpp"
#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/rays.hpp"
#include "finsler/variational.hpp"

namespace py = pybind11;
using namespace finsler;

namespace {

py::array_t<double> tensorArray(const Tensor3& A) {
  const int d = A.dim();
  py::array_t<double> out({d, d, d});
  auto r = out.mutable_unchecked<3>();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) r(i, j, k) = A(i, j, k);
  return out;
}

py::array_t<double> nodesArray(const std::vector<Vec>& nodes) {
  const py::ssize_t n = static_cast<py::ssize_t>(nodes.size());
  const py::ssize_t d = n > 0 ? nodes[0].size() : 0;
  py::array_t<double> out({n, d});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < d; ++j) r(i, j) = nodes[i][j];
  return out;
}

py::array_t<double> curveArray(const DiscreteCurve& c) { return nodesArray(c.nodes); }

py::list windingList(const VecI& w) {
  py::list out;
  for (int i = 0; i < w.size(); ++i) out.append(w[i]);
  return out;
}

py::dict connectDict(const ConnectResult& r) {
  py::dict d;
  d["nodes"] = curveArray(r.curve);
  d["winding"] = windingList(r.curve.winding);
  d["length"] = r.length;
  d["energy"] = r.energy;
  d["grad_norm"] = r.gradNorm;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["zero_curve"] = r.zeroCurve;
  return d;
}

py::dict rayDict(const LightRay& ray) {
  py::dict d;
  d["nodes"] = curveArray(ray.spatial);
  d["times"] = py::cast(ray.times);
  d["winding"] = windingList(ray.spatial.winding);
  d["arrival_time"] = ray.arrivalTime;
  d["length"] = ray.fermatLength;
  d["null_residual"] = ray.nullResidual;
  d["el_constancy"] = ray.elConstancy;
  d["energy"] = ray.energy;
  d["grad_norm"] = ray.gradNorm;
  d["iterations"] = ray.iterations;
  d["converged"] = ray.converged;
  return d;
}

py::dict timelikeDict(const TimelikeResult& r) {
  py::dict d;
  d["nodes"] = nodesArray(r.spatial);
  d["fiber"] = py::cast(r.fiber);
  d["times"] = py::cast(r.times);
  d["winding"] = windingList(r.winding);
  d["arrival_time"] = r.arrivalTime;
  d["extended_length"] = r.extendedLength;
  d["energy_residual"] = r.energyResidual;
  d["fiber_rate_spread"] = r.fiberRateSpread;
  d["energy"] = r.energy;
  d["grad_norm"] = r.gradNorm;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  return d;
}

RayOptions makeOptions(int maxWinding, int segments, double tol, int maxIter, bool past) {
  RayOptions opts;
  opts.maxWinding = maxWinding;
  opts.nSegments = segments;
  opts.tol = tol;
  opts.maxIterations = maxIter;
  opts.direction = past ? TimeDirection::Past : TimeDirection::Future;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Randers/Finsler geodesics, stationary-spacetime light rays and causality";

  // Base class last in translator order: register it first so the derived
  // translators (added later) get the first match.
  const auto& errBase = py::register_exception<Error>(m, "FinslerError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", errBase);
  py::register_exception<DomainError>(m, "DomainError", errBase);
  py::register_exception<NotAGeodesic>(m, "NotAGeodesicError", errBase);

  py::class_<FinslerMetric>(m, "Metric")
      .def_property_readonly("dim", [](const FinslerMetric& g) { return g.domain().dim(); })
      .def_property_readonly("is_randers", &FinslerMetric::isRanders)
      .def("value", &FinslerMetric::value, py::arg("x"), py::arg("y"))
      .def("fundamental_tensor", &FinslerMetric::fundamentalTensor, py::arg("x"), py::arg("y"))
      .def(
          "cartan_tensor",
          [](const FinslerMetric& g, const Vec& x, const Vec& y) {
            return tensorArray(g.cartanTensor(x, y));
          },
          py::arg("x"), py::arg("y"))
      .def("reversibility", &FinslerMetric::reversibility, py::arg("x"),
           py::arg("seed") = std::uint64_t{0x9e3779b9})
      .def("reversed", &FinslerMetric::reversed)
      .def(
          "shoot",
          [](const FinslerMetric& g, const Vec& x0, const Vec& y0, double sMax, double step) {
            const ShotCurve shot = geodesicShoot(g, x0, y0, sMax, step);
            py::dict d;
            d["s"] = py::cast(shot.s);
            d["x"] = nodesArray(shot.x);
            d["v"] = nodesArray(shot.v);
            d["exited_bounds"] = shot.exitedBounds;
            d["speed_drift"] = shot.maxSpeedDrift;
            return d;
          },
          py::arg("x0"), py::arg("y0"), py::arg("smax") = 1.0, py::arg("step") = 1e-3)
      .def(
          "connect",
          [](const FinslerMetric& g, const Vec& p, const Vec& q, int segments, double tol,
             std::optional<std::vector<int>> winding, int maxIter) {
            std::optional<VecI> w;
            if (winding) {
              w = VecI::Zero(static_cast<int>(winding->size()));
              for (size_t i = 0; i < winding->size(); ++i) (*w)[static_cast<int>(i)] = (*winding)[i];
            }
            return connectDict(connectPoints(g, p, q, segments, tol, w ? &*w : nullptr, maxIter));
          },
          py::arg("p"), py::arg("q"), py::arg("segments") = 64, py::arg("tol") = 1e-8,
          py::arg("winding") = py::none(), py::arg("maxiter") = 5000)
      .def(
          "multistart",
          [](const FinslerMetric& g, const Vec& p, const Vec& q, int maxWinding, int segments,
             double tol, int maxIter) {
            py::list out;
            for (const auto& r : multistartHomotopy(g, p, q, maxWinding, segments, tol, maxIter))
              out.append(connectDict(r));
            return out;
          },
          py::arg("p"), py::arg("q"), py::arg("max_winding") = 1, py::arg("segments") = 64,
          py::arg("tol") = 1e-8, py::arg("maxiter") = 5000)
      .def(
          "distance_map",
          [](const FinslerMetric& g, const Vec& x0, const std::vector<int>& res) {
            const DistanceGrid grid = distanceMap(g, x0, res);
            const long n = grid.nodeCount();
            py::array_t<double> dp(n), dm(n);
            auto rp = dp.mutable_unchecked<1>();
            auto rm = dm.mutable_unchecked<1>();
            for (long i = 0; i < n; ++i) {
              rp(i) = grid.dPlus[i];
              rm(i) = grid.dMinus[i];
            }
            py::dict d;
            d["shape"] = py::cast(grid.res);
            d["ticks"] = py::cast(grid.ticks);
            d["source"] = grid.source;
            d["d_plus"] = dp;
            d["d_minus"] = dm;
            return d;
          },
          py::arg("x0"), py::arg("res"))
      .def(
          "omega_norm_sup",
          [](const FinslerMetric& g, const std::vector<int>& res) { return omegaNormSup(g, res); },
          py::arg("res"));

  py::class_<StationarySpacetime>(m, "Spacetime")
      .def_property_readonly("dim", [](const StationarySpacetime& st) { return st.space.dim(); })
      .def("fermat_metric", [](const StationarySpacetime& st) { return fermatMetric(st); })
      .def("reversed_fermat_metric",
           [](const StationarySpacetime& st) { return reversedFermatMetric(st); })
      .def("lorentz_product", &StationarySpacetime::lorentz, py::arg("x"), py::arg("y"),
           py::arg("tdot"))
      .def(
          "lens",
          [](const StationarySpacetime& st, const Vec& source, double t0, const Vec& observer,
             int maxWinding, int segments, double tol, int maxIter, bool past) {
            py::list out;
            for (const auto& ray : lensImages(st, source, t0, observer,
                                              makeOptions(maxWinding, segments, tol, maxIter, past)))
              out.append(rayDict(ray));
            return out;
          },
          py::arg("source"), py::arg("t0"), py::arg("observer"), py::arg("max_winding") = 1,
          py::arg("segments") = 128, py::arg("tol") = 1e-8, py::arg("maxiter") = 5000,
          py::arg("past") = false)
      .def(
          "timelike",
          [](const StationarySpacetime& st, const Vec& source, double t0, const Vec& observer,
             double energy, double a, double b, int maxWinding, int segments, double tol,
             int maxIter, bool past) {
            py::list out;
            for (const auto& r :
                 timelikeFixedEnergy(st, source, t0, observer, energy, a, b,
                                     makeOptions(maxWinding, segments, tol, maxIter, past)))
              out.append(timelikeDict(r));
            return out;
          },
          py::arg("source"), py::arg("t0"), py::arg("observer"), py::arg("energy"),
          py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("max_winding") = 1,
          py::arg("segments") = 128, py::arg("tol") = 1e-8, py::arg("maxiter") = 5000,
          py::arg("past") = false)
      .def(
          "delta_beta_condition",
          [](const StationarySpacetime& st, const std::vector<int>& res) {
            return deltaBetaCondition(st, res);
          },
          py::arg("res"))
      .def(
          "growth_check",
          [](const StationarySpacetime& st, const Vec& base, const std::array<double, 4>& c,
             const std::vector<int>& res) {
            const GrowthReport rep = growthConditionCheck(st, base, c, res);
            py::dict d;
            d["pass"] = rep.pass;
            d["worst_delta"] = rep.worstDelta;
            d["worst_beta"] = rep.worstBeta;
            return d;
          },
          py::arg("base"), py::arg("coefficients"), py::arg("res"))
      .def(
          "causal_crosscheck",
          [](const StationarySpacetime& st, const Vec& x0, double t0, const Vec& x1, double t1,
             const std::vector<int>& res) {
            const CrosscheckReport rep = connectivityCrosscheck(st, x0, t0, x1, t1, res);
            py::dict d;
            d["member"] = rep.member;
            d["distance"] = rep.distance;
            d["path_length"] = rep.pathLength;
            d["curve_constructed"] = rep.curveConstructed;
            d["max_causal_violation"] = rep.maxCausalViolation;
            d["consistent"] = rep.consistent;
            d["path"] = nodesArray(rep.spatialPath);
            d["times"] = py::cast(rep.times);
            return d;
          },
          py::arg("x0"), py::arg("t0"), py::arg("x1"), py::arg("t1"), py::arg("res"));

  py::class_<ProblemConfig>(m, "Problem")
      .def_property_readonly("dim", [](const ProblemConfig& c) { return c.domain.dim(); })
      .def_property_readonly("metric_kind",
                             [](const ProblemConfig& c) { return c.metricChoice; })
      .def("metric", [](const ProblemConfig& c) { return buildMetric(c); })
      .def("spacetime", [](const ProblemConfig& c) { return buildSpacetime(c); })
      .def("dump", [](const ProblemConfig& c) { return dumpConfig(c); });

  m.def("load_config", &loadConfig, py::arg("path"), "Parse a problem config file");
  m.def("parse_config", &parseConfig, py::arg("text"), "Parse a problem config from a string");
}
