#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "finsler/causality.hpp"
#include "finsler/config.hpp"
#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/io.hpp"
#include "finsler/rays.hpp"
#include "finsler/variational.hpp"

namespace {

using namespace finsler;
using io::json;

Vec parseVec(const std::string& text, int dim, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse '" + item + "'");
    }
  }
  if (dim > 0 && static_cast<int>(vals.size()) != dim)
    throw ConfigError(what + " needs " + std::to_string(dim) + " comma-separated values");
  Vec v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

VecI parseWinding(const std::string& text, int dim) {
  const Vec v = parseVec(text, -1, "--winding");
  VecI w = VecI::Zero(dim);
  if (v.size() > dim) throw ConfigError("--winding has more entries than chart axes");
  for (int i = 0; i < v.size(); ++i) w[i] = static_cast<int>(std::lround(v[i]));
  return w;
}

void emit(const json& j, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(outPath);
    if (!out) throw Error("cannot open output file: " + outPath);
    out << j.dump(2) << "\n";
  }
}

std::vector<std::string> curveHeader(int dim, bool withTime, bool withFiber = false,
                                     const std::string& param = "s") {
  std::vector<std::string> h{param};
  for (int i = 1; i <= dim; ++i) h.push_back("x" + std::to_string(i));
  if (withFiber) h.push_back("u");
  if (withTime) h.push_back("t");
  return h;
}

// Gnuplot-ready curve samples: first two chart coordinates, one point per line.
void writePlotCurve(const std::string& path, const std::vector<Vec>& nodes) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  for (const Vec& v : nodes) out << io::fmt17(v[0]) << " " << io::fmt17(v[1]) << "\n";
}

TimeDirection resolveDirection(const std::string& text, bool pastFlag) {
  return (pastFlag || text == "past") ? TimeDirection::Past : TimeDirection::Future;
}

// --- diag --------------------------------------------------------------------

int runDiag(const ProblemConfig& cfg, std::uint64_t seed, int samples, int gridRes,
            const std::string& outPath) {
  const FinslerMetric metric = buildMetric(cfg);
  const ChartDomain& dom = metric.domain();
  const int dim = dom.dim();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto randomPoint = [&] {
    Vec x(dim);
    for (int a = 0; a < dim; ++a) {
      if (dom.isPeriodic(a)) {
        x[a] = unit(rng) * *dom.period(a);
      } else if (dom.bounds(a)) {
        const auto [lo, hi] = *dom.bounds(a);
        x[a] = lo + unit(rng) * (hi - lo);
      } else {
        throw ConfigError("diag needs bounds (or a period) on every axis");
      }
    }
    return x;
  };
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto randomDirection = [&] {
    Vec y(dim);
    for (int a = 0; a < dim; ++a) y[a] = gauss(rng);
    y.normalize();
    return Vec(y * (0.5 + 1.5 * unit(rng)));
  };

  double homog = 0.0, minEig = std::numeric_limits<double>::infinity();
  double zeroSection = 0.0, subadd = 0.0, cartanContract = 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (int s = 0; s < samples; ++s) {
    const Vec x = randomPoint();
    const Vec y = randomDirection();
    const double lam = 0.25 + 3.75 * unit(rng);
    const double F = metric.value(x, y);
    homog = std::max(homog, std::abs(metric.value(x, Vec(lam * y)) - lam * F) / (1.0 + lam * F));

    eig.compute(metric.fundamentalTensor(x, y), Eigen::EigenvaluesOnly);
    minEig = std::min(minEig, eig.eigenvalues().minCoeff());

    zeroSection = std::max(zeroSection, std::abs(metric.value(x, Vec(Vec::Zero(dim)))));

    const Vec y2 = randomDirection();
    subadd = std::max(subadd, (metric.value(x, Vec(y + y2)) - F - metric.value(x, y2)) /
                                  (1.0 + F));

    const Tensor3 A = metric.cartanTensor(x, y);
    cartanContract =
        std::max(cartanContract, A.contractFirst(y).lpNorm<Eigen::Infinity>() / (1.0 + A.maxAbs()));
  }

  Vec center(dim);
  for (int a = 0; a < dim; ++a) {
    if (dom.isPeriodic(a)) {
      center[a] = 0.5 * *dom.period(a);
    } else {
      const auto [lo, hi] = *dom.bounds(a);
      center[a] = 0.5 * (lo + hi);
    }
  }
  const double lambdaCenter = metric.reversibility(center, seed);
  const double omegaSup = metric.isRanders()
                              ? omegaNormSup(metric, std::vector<int>(dim, gridRes))
                              : std::numeric_limits<double>::quiet_NaN();

  json checks = json::array();
  const auto addCheck = [&](const std::string& name, double value, double threshold, bool pass) {
    checks.push_back(json{{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
  };
  addCheck("homogeneity", homog, 1e-9, homog <= 1e-9);
  addCheck("fundamental_tensor_positive", minEig, 0.0, minEig > 0.0);
  addCheck("zero_section", zeroSection, 1e-15, zeroSection <= 1e-15);
  addCheck("subadditivity", subadd, 1e-12, subadd <= 1e-12);
  addCheck("cartan_y_contraction", cartanContract, 1e-7, cartanContract <= 1e-7);
  if (metric.isRanders()) addCheck("omega_norm_sup", omegaSup, 1.0, omegaSup < 1.0);

  bool allPass = true;
  for (const auto& c : checks) allPass = allPass && c.at("pass").get<bool>();

  json out{{"metric", cfg.metricChoice},
           {"samples", samples},
           {"seed", seed},
           {"reversibility_center", lambdaCenter},
           {"checks", std::move(checks)},
           {"pass", allPass}};
  emit(out, outPath);
  return allPass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randers/Finsler geodesic, light-ray and causality toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string configPath, outPath, csvPath;
  bool dumpCfg = false;
  app.add_option("--config", configPath, "problem config file");
  app.add_flag("--dump-config", dumpCfg, "print the canonical config and exit");

  // diag
  auto* diag = app.add_subcommand("diag", "metric sanity checks");
  std::uint64_t seed = 1;
  int samples = 200, gridRes = 33;
  diag->add_option("--seed", seed, "sampling seed");
  diag->add_option("--samples", samples, "number of random samples");
  diag->add_option("--grid", gridRes, "grid resolution per axis");
  diag->add_option("--out", outPath, "JSON output path (default stdout)");

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "shoot a geodesic from x0 with velocity y0");
  std::string x0Text, y0Text, plotPath;
  double sMax = 1.0, step = 1e-3;
  geo->add_option("--x0", x0Text, "start point a,b,...")->required();
  geo->add_option("--y0", y0Text, "initial velocity a,b,...")->required();
  geo->add_option("--smax", sMax, "parameter range");
  geo->add_option("--step", step, "RK4 step");
  geo->add_option("--out", outPath, "JSON output path");
  geo->add_option("--csv", csvPath, "CSV output path (s,x1..xn,v1..vn)");
  geo->add_option("--plot-data", plotPath, "prefix for gnuplot two-column curve files");

  // connect
  auto* con = app.add_subcommand("connect", "energy-minimizing curve between two points");
  std::string fromText, toText, windingText;
  int segments = 64, maxIter = 5000;
  double tol = 1e-8;
  con->add_option("--from", fromText)->required();
  con->add_option("--to", toText)->required();
  con->add_option("--N,--segments", segments, "curve segments");
  con->add_option("--tol", tol);
  con->add_option("--winding", windingText, "winding class k1,k2,... (per axis)");
  con->add_option("--maxiter", maxIter);
  con->add_option("--out", outPath, "JSON output path");
  con->add_option("--csv", csvPath, "CSV output path (s,x1..xn)");
  con->add_option("--plot-data", plotPath, "prefix for gnuplot two-column curve files");

  // lens
  auto* lens = app.add_subcommand("lens", "multi-image light rays between source and observer");
  std::string sourceText, observerText, directionText;
  double t0 = 0.0;
  int maxWinding = 1;
  bool past = false;
  lens->add_option("--source", sourceText)->required();
  lens->add_option("--observer", observerText)->required();
  lens->add_option("--t0", t0, "emission (future) or reception (past) time");
  lens->add_option("--K,--max-winding", maxWinding, "winding classes -K..K per periodic axis");
  lens->add_option("--N,--segments", segments, "curve segments");
  lens->add_option("--tol", tol);
  lens->add_option("--maxiter", maxIter);
  lens->add_option("--direction", directionText, "future or past")
      ->check(CLI::IsMember({"future", "past"}));
  lens->add_flag("--past", past, "shorthand for --direction past");
  lens->add_option("--out", outPath, "output directory (one CSV per ray plus summary.json)");
  lens->add_option("--csv", csvPath, "combined CSV output path (ray,s,x1..xn,t)");
  lens->add_option("--plot-data", plotPath, "prefix for gnuplot two-column curve files");

  // timelike
  auto* tl = app.add_subcommand("timelike", "fixed-energy timelike geodesics");
  double energy = 1.0;
  std::string intervalText = "0,1";
  tl->add_option("--source", sourceText)->required();
  tl->add_option("--observer", observerText)->required();
  tl->add_option("--t0", t0);
  tl->add_option("--energy", energy, "energy level E > 0");
  tl->add_option("--interval", intervalText, "parameter interval a,b");
  tl->add_option("--K,--max-winding", maxWinding, "winding classes -K..K per periodic axis");
  tl->add_option("--N,--segments", segments, "curve segments");
  tl->add_option("--tol", tol);
  tl->add_option("--maxiter", maxIter);
  tl->add_option("--direction", directionText, "future or past")
      ->check(CLI::IsMember({"future", "past"}));
  tl->add_flag("--past", past, "shorthand for --direction past");
  tl->add_option("--out", outPath, "output directory (one CSV per ray plus summary.json)");
  tl->add_option("--csv", csvPath, "combined CSV output path (ray,sigma,x1..xn,u,t)");
  tl->add_option("--plot-data", plotPath, "prefix for gnuplot two-column curve files");

  // distmap
  auto* dm = app.add_subcommand("distmap", "forward/backward Finsler distance maps");
  std::string resText = "101,101";
  dm->add_option("--x0", x0Text)->required();
  dm->add_option("--resolution,--res", resText, "grid resolution n1,n2,...");
  dm->add_option("--out", outPath, "JSON output path");
  dm->add_option("--csv", csvPath, "CSV output path (x1..xn,d_plus,d_minus)");
  dm->add_option("--plot-data", plotPath, "prefix for gnuplot heatmap matrix files");

  // causal
  auto* ca = app.add_subcommand("causal", "causal cone and connectivity checks");
  std::string apexText, eventText;
  double horizon = 1.0;
  int nSlices = 8;
  ca->add_option("--apex", apexText)->required();
  ca->add_option("--t0", t0, "apex time");
  ca->add_option("--horizon", horizon);
  ca->add_option("--resolution,--res", resText, "grid resolution n1,n2,...");
  ca->add_option("--slices", nSlices);
  ca->add_option("--direction", directionText, "future or past")
      ->check(CLI::IsMember({"future", "past"}));
  ca->add_flag("--past", past, "shorthand for --direction past");
  ca->add_option("--event", eventText, "event x1,..,xn,t for membership + crosscheck");
  ca->add_option("--out", outPath, "JSON output path");
  ca->add_option("--csv", csvPath, "CSV output path (slice,offset,poly,x1,x2)");
  ca->add_option("--plot-data", plotPath, "prefix for gnuplot slice contour files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (configPath.empty()) throw ConfigError("--config is required");
    const ProblemConfig cfg = loadConfig(configPath);
    const int dim = cfg.domain.dim();

    if (dumpCfg) {
      std::cout << dumpConfig(cfg);
      return 0;
    }
    if (app.get_subcommands().empty()) throw ConfigError("expected a subcommand");

    if (diag->parsed()) return runDiag(cfg, seed, samples, gridRes, outPath);

    if (geo->parsed()) {
      const FinslerMetric metric = buildMetric(cfg);
      const ShotCurve shot =
          geodesicShoot(metric, parseVec(x0Text, dim, "--x0"), parseVec(y0Text, dim, "--y0"),
                        sMax, step);
      json out{{"samples", shot.s.size()},
               {"exited_bounds", shot.exitedBounds},
               {"speed_drift", shot.maxSpeedDrift},
               {"s_end", shot.s.back()}};
      emit(out, outPath);
      if (!csvPath.empty()) {
        auto header = curveHeader(dim, false);
        for (int i = 1; i <= dim; ++i) header.push_back("v" + std::to_string(i));
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < shot.s.size(); ++i) {
          std::vector<double> row{shot.s[i]};
          for (int c = 0; c < dim; ++c) row.push_back(shot.x[i][c]);
          for (int c = 0; c < dim; ++c) row.push_back(shot.v[i][c]);
          rows.push_back(std::move(row));
        }
        io::writeCsv(csvPath, header, rows);
      }
      if (!plotPath.empty()) writePlotCurve(plotPath + "_curve.dat", shot.x);
      return 0;
    }

    if (con->parsed()) {
      const FinslerMetric metric = buildMetric(cfg);
      std::optional<VecI> winding;
      if (!windingText.empty()) winding = parseWinding(windingText, dim);
      const ConnectResult r =
          connectPoints(metric, parseVec(fromText, dim, "--from"), parseVec(toText, dim, "--to"),
                        segments, tol, winding ? &*winding : nullptr, maxIter);
      emit(io::toJson(r, cfg.domain), outPath);
      if (!csvPath.empty()) io::writeCsv(csvPath, curveHeader(dim, false), io::curveRows(r.curve));
      if (!plotPath.empty()) writePlotCurve(plotPath + "_curve.dat", r.curve.nodes);
      return r.converged ? 0 : 1;
    }

    if (lens->parsed()) {
      const StationarySpacetime st = buildSpacetime(cfg);
      RayOptions opts;
      opts.maxWinding = maxWinding;
      opts.nSegments = segments;
      opts.tol = tol;
      opts.maxIterations = maxIter;
      opts.direction = resolveDirection(directionText, past);
      auto rays = lensImages(st, parseVec(sourceText, dim, "--source"), t0,
                             parseVec(observerText, dim, "--observer"), opts);
      std::stable_sort(rays.begin(), rays.end(), [](const LightRay& a, const LightRay& b) {
        return a.arrivalTime < b.arrivalTime;
      });

      double minSep = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < rays.size(); ++i)
        for (size_t j = i + 1; j < rays.size(); ++j)
          minSep = std::min(minSep, rays[i].spatial.supDistance(cfg.domain, rays[j].spatial));

      json images = json::array();
      bool allConverged = true;
      for (const auto& ray : rays) {
        images.push_back(io::toJson(ray, cfg.domain));
        allConverged = allConverged && ray.converged;
      }
      json out{{"count", rays.size()}, {"images", std::move(images)}};
      if (rays.size() > 1) out["min_pairwise_separation"] = minSep;

      if (outPath.empty()) {
        emit(out, "");
      } else {
        std::filesystem::create_directories(outPath);
        for (size_t r = 0; r < rays.size(); ++r)
          io::writeCsv(outPath + "/ray_" + std::to_string(r) + ".csv", curveHeader(dim, true),
                       io::rayRows(rays[r]));
        emit(out, outPath + "/summary.json");
      }
      if (!csvPath.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t r = 0; r < rays.size(); ++r)
          for (auto& row : io::rayRows(rays[r])) {
            row.insert(row.begin(), static_cast<double>(r));
            rows.push_back(std::move(row));
          }
        auto header = curveHeader(dim, true);
        header.insert(header.begin(), "ray");
        io::writeCsv(csvPath, header, rows);
      }
      if (!plotPath.empty())
        for (size_t r = 0; r < rays.size(); ++r)
          writePlotCurve(plotPath + "_ray_" + std::to_string(r) + ".dat", rays[r].spatial.nodes);
      return allConverged && !rays.empty() ? 0 : 1;
    }

    if (tl->parsed()) {
      if (energy <= 0.0) throw ConfigError("--energy must be positive");
      const StationarySpacetime st = buildSpacetime(cfg);
      const Vec interval = parseVec(intervalText, 2, "--interval");
      RayOptions opts;
      opts.maxWinding = maxWinding;
      opts.nSegments = segments;
      opts.tol = tol;
      opts.maxIterations = maxIter;
      opts.direction = resolveDirection(directionText, past);
      auto results =
          timelikeFixedEnergy(st, parseVec(sourceText, dim, "--source"), t0,
                              parseVec(observerText, dim, "--observer"), energy, interval[0],
                              interval[1], opts);
      std::stable_sort(results.begin(), results.end(),
                       [](const TimelikeResult& a, const TimelikeResult& b) {
                         return a.arrivalTime < b.arrivalTime;
                       });
      json arr = json::array();
      bool allConverged = !results.empty();
      for (const auto& r : results) {
        arr.push_back(io::toJson(r, cfg.domain));
        allConverged = allConverged && r.converged;
      }
      const json out{{"count", results.size()}, {"energy", energy}, {"results", std::move(arr)}};
      if (outPath.empty()) {
        emit(out, "");
      } else {
        std::filesystem::create_directories(outPath);
        for (size_t r = 0; r < results.size(); ++r)
          io::writeCsv(outPath + "/ray_" + std::to_string(r) + ".csv",
                       curveHeader(dim, true, true, "sigma"),
                       io::timelikeRows(results[r], interval[0], interval[1]));
        emit(out, outPath + "/summary.json");
      }
      if (!csvPath.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t r = 0; r < results.size(); ++r)
          for (auto& row : io::timelikeRows(results[r], interval[0], interval[1])) {
            row.insert(row.begin(), static_cast<double>(r));
            rows.push_back(std::move(row));
          }
        auto header = curveHeader(dim, true, true, "sigma");
        header.insert(header.begin(), "ray");
        io::writeCsv(csvPath, header, rows);
      }
      if (!plotPath.empty())
        for (size_t r = 0; r < results.size(); ++r)
          writePlotCurve(plotPath + "_ray_" + std::to_string(r) + ".dat", results[r].spatial);
      return allConverged ? 0 : 1;
    }

    if (dm->parsed()) {
      const FinslerMetric metric = buildMetric(cfg);
      const Vec resVec = parseVec(resText, dim, "--res");
      std::vector<int> res(dim);
      for (int a = 0; a < dim; ++a) res[a] = static_cast<int>(std::lround(resVec[a]));
      const DistanceGrid grid = distanceMap(metric, parseVec(x0Text, dim, "--x0"), res);

      double maxPlus = 0.0, maxMinus = 0.0;
      for (long i = 0; i < grid.nodeCount(); ++i) {
        if (std::isfinite(grid.dPlus[i])) maxPlus = std::max(maxPlus, grid.dPlus[i]);
        if (std::isfinite(grid.dMinus[i])) maxMinus = std::max(maxMinus, grid.dMinus[i]);
      }
      json src = json::array();
      for (int c = 0; c < dim; ++c) src.push_back(grid.source[c]);
      emit(json{{"source", std::move(src)},
                {"nodes", grid.nodeCount()},
                {"max_d_plus", maxPlus},
                {"max_d_minus", maxMinus}},
           outPath);
      if (!csvPath.empty()) {
        std::vector<std::string> header;
        for (int i = 1; i <= dim; ++i) header.push_back("x" + std::to_string(i));
        header.push_back("d_plus");
        header.push_back("d_minus");
        io::writeCsv(csvPath, header, io::distanceRows(grid));
      }
      if (!plotPath.empty()) {
        if (dim != 2) throw ConfigError("--plot-data heatmaps need a 2-axis chart");
        const auto writeMat = [&](const std::string& path, const std::vector<double>& vals) {
          std::ofstream out(path);
          if (!out) throw Error("cannot open output file: " + path);
          std::vector<int> c(2);
          for (c[1] = 0; c[1] < res[1]; ++c[1]) {
            for (c[0] = 0; c[0] < res[0]; ++c[0])
              out << (c[0] ? " " : "") << io::fmt17(vals[grid.index(c)]);
            out << "\n";
          }
        };
        writeMat(plotPath + "_dplus.mat", grid.dPlus);
        writeMat(plotPath + "_dminus.mat", grid.dMinus);
      }
      return 0;
    }

    if (ca->parsed()) {
      const StationarySpacetime st = buildSpacetime(cfg);
      const Vec resVec = parseVec(resText, dim, "--res");
      std::vector<int> res(dim);
      for (int a = 0; a < dim; ++a) res[a] = static_cast<int>(std::lround(resVec[a]));
      const TimeDirection dirn = resolveDirection(directionText, past);
      const CausalCone cone = causalCone(st, parseVec(apexText, dim, "--apex"), t0, horizon,
                                         dirn, res, nSlices);

      json out{{"apex_time", cone.apexTime},
               {"horizon", cone.horizon},
               {"direction", dirn == TimeDirection::Past ? "past" : "future"},
               {"slices", nSlices}};
      if (!eventText.empty()) {
        const Vec ev = parseVec(eventText, dim + 1, "--event");
        const Vec x1 = ev.head(dim);
        const double t1 = ev[dim];
        const CrosscheckReport rep =
            connectivityCrosscheck(st, cone.grid, cone.apexTime, x1, t1);
        out["event_member"] = cone.contains(x1, t1);
        out["crosscheck"] = io::toJson(rep);
      }
      emit(out, outPath);

      if (!csvPath.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t s = 0; s < cone.slices.size(); ++s)
          for (size_t p = 0; p < cone.slices[s].contours.size(); ++p)
            for (const Vec& v : cone.slices[s].contours[p])
              rows.push_back({static_cast<double>(s), cone.slices[s].timeOffset,
                              static_cast<double>(p), v[0], v[1]});
        io::writeCsv(csvPath, {"slice", "offset", "poly", "x1", "x2"}, rows);
      }
      if (!plotPath.empty()) {
        for (size_t s = 0; s < cone.slices.size(); ++s) {
          const std::string path = plotPath + "_slice_" + std::to_string(s) + ".dat";
          std::ofstream outFile(path);
          if (!outFile) throw Error("cannot open output file: " + path);
          for (const auto& poly : cone.slices[s].contours) {
            for (const Vec& v : poly)
              outFile << io::fmt17(v[0]) << " " << io::fmt17(v[1]) << "\n";
            outFile << "\n";
          }
        }
      }
      return 0;
    }

    throw ConfigError("expected a subcommand");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
