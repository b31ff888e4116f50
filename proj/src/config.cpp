#include "finsler/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

struct Value {
  enum Kind { Scalar, List, None } kind = Scalar;
  std::string scalar;
  std::vector<Value> items;
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Value parseValue(const std::string& text, size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= text.size()) throw ConfigError("empty value");

  Value v;
  if (text[pos] == '[') {
    ++pos;
    v.kind = Value::List;
    while (true) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos >= text.size()) throw ConfigError("unterminated list in value: " + text);
      if (text[pos] == ']') {
        ++pos;
        break;
      }
      v.items.push_back(parseValue(text, pos));
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == ',') ++pos;
    }
    return v;
  }

  // scalar: runs to the next top-level ',' or ']'
  size_t start = pos;
  int depth = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || c == ']')) break;
    ++pos;
  }
  v.scalar = trim(text.substr(start, pos - start));
  if (v.scalar == "none") v.kind = Value::None;
  return v;
}

Value parseValue(const std::string& text) {
  size_t pos = 0;
  Value v = parseValue(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ConfigError("trailing input in value: " + text);
  return v;
}

std::vector<Expression> compileVector(const Value& v, int dim, const std::string& key) {
  if (v.kind != Value::List || static_cast<int>(v.items.size()) != dim)
    throw ConfigError(key + " must be a list of " + std::to_string(dim) + " expressions");
  std::vector<Expression> out;
  for (const Value& e : v.items) {
    if (e.kind != Value::Scalar) throw ConfigError(key + " entries must be expressions");
    out.push_back(Expression::compile(e.scalar, dim));
  }
  return out;
}

std::vector<std::vector<Expression>> compileMatrix(const Value& v, int dim,
                                                   const std::string& key) {
  if (v.kind != Value::List || static_cast<int>(v.items.size()) != dim)
    throw ConfigError(key + " must be a " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " matrix of expressions");
  std::vector<std::vector<Expression>> out;
  for (const Value& row : v.items) out.push_back(compileVector(row, dim, key + " row"));
  return out;
}

bool sampleable(const ChartDomain& dom) {
  for (int a = 0; a < dom.dim(); ++a)
    if (!dom.isPeriodic(a) && !dom.bounds(a)) return false;
  return true;
}

Mat evalMatrix(const std::vector<std::vector<Expression>>& m, const Vec& x) {
  const int n = static_cast<int>(m.size());
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = m[i][j](x);
  return g;
}

Vec evalVector(const std::vector<Expression>& v, const Vec& x) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i](x);
  return out;
}

void checkSymmetric(const ProblemConfig& cfg, const std::vector<std::vector<Expression>>& m,
                    const std::string& key) {
  if (!sampleable(cfg.domain)) return;
  for (const Vec& x : boundsGrid(cfg.domain, std::vector<int>(cfg.domain.dim(), 3))) {
    const Mat g = evalMatrix(m, x);
    const double scale = 1.0 + g.lpNorm<Eigen::Infinity>();
    if ((g - g.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * scale)
      throw ConfigError(key + " is not symmetric");
  }
}

}  // namespace

ProblemConfig parseConfig(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::vector<std::string> order;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
    if (entries.count(key))
      throw ConfigError("line " + std::to_string(lineNo) + ": duplicate key " + key);
    entries[key] = val;
    order.push_back(key);
  }

  const auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string v = it->second;
    entries.erase(it);
    return v;
  };

  const auto dimText = take("dim");
  if (!dimText) throw ConfigError("missing required key: dim");
  const double dimVal = Expression::compile(*dimText, 0).evalConstant();
  const int dim = static_cast<int>(dimVal);
  if (dim < 1 || dimVal != dim) throw ConfigError("dim must be a positive integer");

  ProblemConfig cfg;
  cfg.domain = ChartDomain(dim);
  cfg.periodText.assign(dim, "none");
  cfg.boundsText.assign(dim, "none");

  if (const auto periods = take("periods")) {
    const Value v = parseValue(*periods);
    if (v.kind != Value::List || static_cast<int>(v.items.size()) != dim)
      throw ConfigError("periods must list one entry per axis");
    for (int a = 0; a < dim; ++a) {
      if (v.items[a].kind == Value::None) continue;
      if (v.items[a].kind != Value::Scalar) throw ConfigError("periods entries must be scalars");
      cfg.domain.setPeriod(a, Expression::compile(v.items[a].scalar, 0).evalConstant());
      cfg.periodText[a] = v.items[a].scalar;
    }
  }

  if (const auto bounds = take("bounds")) {
    const Value v = parseValue(*bounds);
    if (v.kind != Value::List || static_cast<int>(v.items.size()) != dim)
      throw ConfigError("bounds must list one entry per axis");
    for (int a = 0; a < dim; ++a) {
      if (v.items[a].kind == Value::None) continue;
      if (v.items[a].kind != Value::List || v.items[a].items.size() != 2)
        throw ConfigError("bounds entries must be [lo, hi] or none");
      const double lo = Expression::compile(v.items[a].items[0].scalar, 0).evalConstant();
      const double hi = Expression::compile(v.items[a].items[1].scalar, 0).evalConstant();
      cfg.domain.setBounds(a, lo, hi);
      cfg.boundsText[a] = "[" + v.items[a].items[0].scalar + ", " + v.items[a].items[1].scalar + "]";
    }
  }

  const auto hText = take("h");
  const auto omegaText = take("omega");
  if (hText || omegaText) {
    if (!hText || !omegaText) throw ConfigError("Randers data needs both h and omega");
    cfg.hasRanders = true;
    cfg.h = compileMatrix(parseValue(*hText), dim, "h");
    cfg.omega = compileVector(parseValue(*omegaText), dim, "omega");
    checkSymmetric(cfg, cfg.h, "h");
  }

  const auto g0Text = take("g0");
  const auto deltaText = take("delta");
  const auto betaText = take("beta");
  if (g0Text || deltaText || betaText) {
    if (!g0Text || !deltaText || !betaText)
      throw ConfigError("spacetime data needs g0, delta and beta");
    cfg.hasSpacetime = true;
    cfg.g0 = compileMatrix(parseValue(*g0Text), dim, "g0");
    cfg.delta = compileVector(parseValue(*deltaText), dim, "delta");
    cfg.beta = Expression::compile(*betaText, dim);
    checkSymmetric(cfg, cfg.g0, "g0");
    if (const auto phi = take("conformal")) {
      cfg.hasConformal = true;
      cfg.conformal = Expression::compile(*phi, dim);
    }
  }

  if (!cfg.hasRanders && !cfg.hasSpacetime)
    throw ConfigError("config must define Randers data (h, omega) or spacetime data (g0, delta, beta)");

  if (const auto metric = take("metric")) {
    if (*metric != "randers" && *metric != "fermat")
      throw ConfigError("metric must be 'randers' or 'fermat'");
    cfg.metricChoice = *metric;
  } else {
    cfg.metricChoice = cfg.hasRanders ? "randers" : "fermat";
    if (cfg.hasRanders && cfg.hasSpacetime)
      throw ConfigError("both data groups present; set metric = randers or metric = fermat");
  }
  if (cfg.metricChoice == "randers" && !cfg.hasRanders)
    throw ConfigError("metric = randers needs h and omega");
  if (cfg.metricChoice == "fermat" && !cfg.hasSpacetime)
    throw ConfigError("metric = fermat needs g0, delta and beta");

  if (!entries.empty()) throw ConfigError("unknown key: " + entries.begin()->first);
  return cfg;
}

ProblemConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

std::string dumpConfig(const ProblemConfig& cfg) {
  std::ostringstream out;
  const int dim = cfg.domain.dim();
  out << "dim = " << dim << "\n";

  const auto joinList = [](const std::vector<std::string>& items) {
    std::string s = "[";
    for (size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
    return s + "]";
  };
  out << "periods = " << joinList(cfg.periodText) << "\n";
  out << "bounds = " << joinList(cfg.boundsText) << "\n";
  out << "metric = " << cfg.metricChoice << "\n";

  const auto matrixText = [&](const std::vector<std::vector<Expression>>& m) {
    std::vector<std::string> rows;
    for (const auto& row : m) {
      std::vector<std::string> cells;
      for (const auto& e : row) cells.push_back(e.text());
      rows.push_back(joinList(cells));
    }
    return joinList(rows);
  };
  const auto vectorText = [&](const std::vector<Expression>& v) {
    std::vector<std::string> cells;
    for (const auto& e : v) cells.push_back(e.text());
    return joinList(cells);
  };

  if (cfg.hasRanders) {
    out << "h = " << matrixText(cfg.h) << "\n";
    out << "omega = " << vectorText(cfg.omega) << "\n";
  }
  if (cfg.hasSpacetime) {
    out << "g0 = " << matrixText(cfg.g0) << "\n";
    out << "delta = " << vectorText(cfg.delta) << "\n";
    out << "beta = " << cfg.beta.text() << "\n";
    if (cfg.hasConformal) out << "conformal = " << cfg.conformal.text() << "\n";
  }
  return out.str();
}

FinslerMetric buildMetric(const ProblemConfig& cfg) {
  if (cfg.metricChoice == "fermat") return fermatMetric(buildSpacetime(cfg));

  RandersData data;
  data.h = RiemannianField(cfg.domain, [m = cfg.h](const Vec& x) { return evalMatrix(m, x); });
  data.omega =
      OneFormField(cfg.domain, [v = cfg.omega](const Vec& x) { return evalVector(v, x); });
  if (sampleable(cfg.domain))
    data.h.requirePositiveDefinite(std::vector<int>(cfg.domain.dim(), 9));
  return FinslerMetric::randers(cfg.domain, std::move(data));
}

StationarySpacetime buildSpacetime(const ProblemConfig& cfg) {
  if (!cfg.hasSpacetime) throw ConfigError("config has no spacetime data (g0, delta, beta)");

  StationarySpacetime st;
  st.space = cfg.domain;
  st.g0 = RiemannianField(cfg.domain, [m = cfg.g0](const Vec& x) { return evalMatrix(m, x); });
  st.delta = VectorField(cfg.domain, [v = cfg.delta](const Vec& x) { return evalVector(v, x); });
  st.beta = ScalarField(cfg.domain, [e = cfg.beta](const Vec& x) { return e(x); });
  if (cfg.hasConformal)
    st.conformal = ScalarField(cfg.domain, [e = cfg.conformal](const Vec& x) { return e(x); });

  if (sampleable(cfg.domain)) {
    const std::vector<int> res(cfg.domain.dim(), 9);
    st.g0.requirePositiveDefinite(res);
    if (!(st.beta.minOnGrid(res) > 0.0)) throw ConfigError("beta must be positive");
    if (cfg.hasConformal) return conformalNormalize(st, res);
  } else if (cfg.hasConformal) {
    throw ConfigError("conformal factor needs bounds or periods on every axis");
  }
  return st;
}

}  // namespace finsler
