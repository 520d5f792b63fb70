#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>

namespace wolffpot::cli {

json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

bool Validation::has_schema_issues() const {
  return std::any_of(issues.begin(), issues.end(), [](const Issue& i) { return i.category == "schema"; });
}

bool Validation::has_admissibility_issues() const {
  return std::any_of(issues.begin(), issues.end(), [](const Issue& i) { return i.category == "admissibility"; });
}

namespace {

struct Range {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool allow_inf = false;
};

const Range kAny{};
const Range kPositive{0.0, kInf, true};
const Range kNonNegative{0.0};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Checker {
 public:
  std::vector<Issue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({"schema", "schema", path, msg}); }

  void admissible(const std::string& path, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) issues.push_back({"admissibility", d.code, path, d.message});
  }

  bool ok() const { return issues.empty(); }

  void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool found = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
      if (!found) fail(join(path, it.key()), "unknown key");
    }
  }

  // Sub-object; nullptr when absent and not required, or malformed.
  json* object(json& parent, const char* key, const std::string& path, bool required) {
    const std::string where = join(path, key);
    if (!parent.contains(key)) {
      if (required) fail(where, "required object is missing");
      return nullptr;
    }
    json& v = parent[key];
    if (!v.is_object()) {
      fail(where, "expected an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> value(const json& v, const std::string& where, const Range& r) {
    double x = 0.0;
    if (v.is_number()) {
      x = v.get<double>();
    } else if (v.is_string() && r.allow_inf && v.get<std::string>() == "inf") {
      x = kInf;
    } else {
      fail(where, r.allow_inf ? "expected a number or \"inf\"" : "expected a number");
      return std::nullopt;
    }
    if (x < r.lo || (r.lo_open && x == r.lo) || x > r.hi) {
      fail(where, "out of range" + describe(r));
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> number(json& obj, const char* key, const std::string& path, std::optional<double> def,
                               const Range& r = kAny) {
    const std::string where = join(path, key);
    if (!obj.contains(key)) {
      if (!def) {
        fail(where, "required number is missing");
        return std::nullopt;
      }
      obj[key] = number_json(*def);
      return def;
    }
    return value(obj[key], where, r);
  }

  // Number or null. The outer optional signals an error.
  std::optional<std::optional<double>> nullable(json& obj, const char* key, const std::string& path,
                                                const Range& r = kAny) {
    if (!obj.contains(key) || obj[key].is_null()) {
      obj[key] = nullptr;
      return std::optional<double>{};
    }
    auto v = value(obj[key], join(path, key), r);
    if (!v) return std::nullopt;
    return std::optional<double>{*v};
  }

  std::optional<int> integer(json& obj, const char* key, const std::string& path, std::optional<int> def,
                             long lo = -1000000000L, long hi = 1000000000L) {
    const std::string where = join(path, key);
    if (!obj.contains(key)) {
      if (!def) {
        fail(where, "required integer is missing");
        return std::nullopt;
      }
      obj[key] = *def;
      return def;
    }
    const json& v = obj[key];
    if (!v.is_number_integer()) {
      fail(where, "expected an integer");
      return std::nullopt;
    }
    const long x = v.get<long>();
    if (x < lo || x > hi) {
      fail(where, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return std::nullopt;
    }
    return static_cast<int>(x);
  }

  std::optional<bool> boolean(json& obj, const char* key, const std::string& path, bool def) {
    if (!obj.contains(key)) {
      obj[key] = def;
      return def;
    }
    if (!obj[key].is_boolean()) {
      fail(join(path, key), "expected a boolean");
      return std::nullopt;
    }
    return obj[key].get<bool>();
  }

  std::optional<std::string> choice(json& obj, const char* key, const std::string& path,
                                    const std::vector<std::string>& options, std::optional<std::string> def) {
    const std::string where = join(path, key);
    if (!obj.contains(key)) {
      if (!def) {
        fail(where, "required string is missing");
        return std::nullopt;
      }
      obj[key] = *def;
      return def;
    }
    const json& v = obj[key];
    if (!v.is_string()) {
      fail(where, "expected a string");
      return std::nullopt;
    }
    const std::string s = v.get<std::string>();
    if (!options.empty() && std::find(options.begin(), options.end(), s) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      fail(where, "expected one of: " + list);
      return std::nullopt;
    }
    return s;
  }

  std::optional<Point> point(const json& v, const std::string& where, int dim) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim) {
      fail(where, "expected an array of " + std::to_string(dim) + " numbers");
      return std::nullopt;
    }
    Point x(dim);
    for (int d = 0; d < dim; ++d) {
      auto c = value(v[d], at(where, d), kAny);
      if (!c) return std::nullopt;
      x[d] = *c;
    }
    return x;
  }

  std::optional<Point> point_field(json& obj, const char* key, const std::string& path, int dim) {
    const std::string where = join(path, key);
    if (!obj.contains(key)) {
      fail(where, "required point is missing");
      return std::nullopt;
    }
    return point(obj[key], where, dim);
  }

 private:
  static std::string describe(const Range& r) {
    auto g = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v);
      return std::string(buf);
    };
    std::string s = " (";
    if (r.lo > -kInf) s += (r.lo_open ? "> " : ">= ") + g(r.lo);
    if (r.hi < kInf) s += std::string(r.lo > -kInf ? ", " : "") + "<= " + g(r.hi);
    return s + ")";
  }
};

std::optional<Grid> parse_grid(Checker& ck, json& obj, const std::string& path, int dim) {
  ck.known_keys(obj, path, {"origin", "spacing", "extents"});
  auto origin = ck.point_field(obj, "origin", path, dim);
  auto spacing = ck.number(obj, "spacing", path, std::nullopt, kPositive);
  const std::string where = join(path, "extents");
  std::vector<int> counts;
  if (!obj.contains("extents") || !obj["extents"].is_array() || static_cast<int>(obj["extents"].size()) != dim) {
    ck.fail(where, "expected an array of " + std::to_string(dim) + " node counts");
    return std::nullopt;
  }
  for (int d = 0; d < dim; ++d) {
    const json& v = obj["extents"][d];
    if (!v.is_number_integer() || v.get<long>() < 2 || v.get<long>() > 100000) {
      ck.fail(at(where, d), "expected an integer node count >= 2");
      return std::nullopt;
    }
    counts.push_back(v.get<int>());
  }
  if (!origin || !spacing) return std::nullopt;
  return Grid(*origin, *spacing, counts);
}

std::optional<std::pair<Point, Point>> parse_box(Checker& ck, json& obj, const std::string& path, int dim) {
  auto lo = ck.point_field(obj, "lower", path, dim);
  auto hi = ck.point_field(obj, "upper", path, dim);
  if (!lo || !hi) return std::nullopt;
  if (!((hi->array() > lo->array()).all())) {
    ck.fail(join(path, "upper"), "must exceed lower in every coordinate");
    return std::nullopt;
  }
  return std::make_pair(*lo, *hi);
}

std::optional<Measure> parse_measure(Checker& ck, json& root, int dim) {
  if (!root.contains("measure")) root["measure"] = json::array();
  json& list = root["measure"];
  if (!list.is_array()) {
    ck.fail("measure", "expected an array of measure parts");
    return std::nullopt;
  }
  Measure m(dim);
  bool good = true;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = at("measure", i);
    json& part = list[i];
    if (!part.is_object()) {
      ck.fail(path, "expected an object");
      good = false;
      continue;
    }
    auto type = ck.choice(part, "type", path, {"dirac", "atoms", "ball", "box", "grid_density"}, std::nullopt);
    if (!type) {
      good = false;
      continue;
    }
    if (*type == "dirac") {
      ck.known_keys(part, path, {"type", "location", "mass"});
      auto x = ck.point_field(part, "location", path, dim);
      auto w = ck.number(part, "mass", path, 1.0, kNonNegative);
      if (x && w) m += Measure::dirac(*x, *w); else good = false;
    } else if (*type == "atoms") {
      ck.known_keys(part, path, {"type", "locations", "masses"});
      if (!part.contains("locations") || !part["locations"].is_array() || !part.contains("masses") ||
          !part["masses"].is_array() || part["locations"].size() != part["masses"].size()) {
        ck.fail(path, "atoms need equally long 'locations' and 'masses' arrays");
        good = false;
        continue;
      }
      std::vector<Point> xs;
      std::vector<double> ws;
      for (std::size_t k = 0; k < part["masses"].size(); ++k) {
        auto x = ck.point(part["locations"][k], at(join(path, "locations"), k), dim);
        auto w = ck.value(part["masses"][k], at(join(path, "masses"), k), kNonNegative);
        if (!x || !w) {
          good = false;
          continue;
        }
        xs.push_back(*x);
        ws.push_back(*w);
      }
      if (good && !xs.empty()) m += Measure::atomic(xs, ws);
    } else if (*type == "ball") {
      ck.known_keys(part, path, {"type", "center", "radius", "density"});
      auto c = ck.point_field(part, "center", path, dim);
      auto r = ck.number(part, "radius", path, std::nullopt, kPositive);
      auto rho = ck.number(part, "density", path, std::nullopt, kNonNegative);
      if (c && r && rho) m += Measure::ball_uniform(*c, *r, *rho); else good = false;
    } else if (*type == "box") {
      ck.known_keys(part, path, {"type", "lower", "upper", "density"});
      auto box = parse_box(ck, part, path, dim);
      auto rho = ck.number(part, "density", path, std::nullopt, kNonNegative);
      if (box && rho) m += Measure::box_uniform(box->first, box->second, *rho); else good = false;
    } else {
      ck.known_keys(part, path, {"type", "origin", "spacing", "shape", "values"});
      auto origin = ck.point_field(part, "origin", path, dim);
      auto h = ck.number(part, "spacing", path, std::nullopt, kPositive);
      std::vector<int> shape;
      Index cells = 1;
      if (!part.contains("shape") || !part["shape"].is_array() || static_cast<int>(part["shape"].size()) != dim) {
        ck.fail(join(path, "shape"), "expected " + std::to_string(dim) + " cell counts");
        good = false;
        continue;
      }
      for (const auto& v : part["shape"]) {
        if (!v.is_number_integer() || v.get<long>() < 1) {
          ck.fail(join(path, "shape"), "cell counts must be positive integers");
          good = false;
          break;
        }
        shape.push_back(v.get<int>());
        cells *= shape.back();
      }
      if (!part.contains("values") || !part["values"].is_array() ||
          static_cast<Index>(part["values"].size()) != cells) {
        ck.fail(join(path, "values"), "expected one density per cell (" + std::to_string(cells) + ")");
        good = false;
        continue;
      }
      std::vector<double> values;
      for (std::size_t k = 0; k < part["values"].size(); ++k) {
        auto v = ck.value(part["values"][k], at(join(path, "values"), k), kNonNegative);
        values.push_back(v.value_or(0.0));
        if (!v) good = false;
      }
      if (good && origin && h) m += Measure::grid_density(*origin, *h, shape, values); else good = false;
    }
  }
  if (!good) return std::nullopt;
  return m;
}

std::optional<CompactSet> parse_set(Checker& ck, json& obj, const std::string& path, int dim) {
  if (!obj.is_object()) {
    ck.fail(path, "expected an object with 'balls' and/or 'boxes'");
    return std::nullopt;
  }
  ck.known_keys(obj, path, {"balls", "boxes"});
  CompactSet E;
  E.dim = dim;
  bool good = true;
  for (const char* key : {"balls", "boxes"}) {
    if (!obj.contains(key)) obj[key] = json::array();
    if (!obj[key].is_array()) {
      ck.fail(join(path, key), "expected an array");
      good = false;
    }
  }
  if (!good) return std::nullopt;
  for (std::size_t i = 0; i < obj["balls"].size(); ++i) {
    json& b = obj["balls"][i];
    const std::string where = at(join(path, "balls"), i);
    if (!b.is_object()) {
      ck.fail(where, "expected an object");
      good = false;
      continue;
    }
    ck.known_keys(b, where, {"center", "radius"});
    auto c = ck.point_field(b, "center", where, dim);
    auto r = ck.number(b, "radius", where, std::nullopt, kPositive);
    if (c && r) E.balls.push_back({*c, *r}); else good = false;
  }
  for (std::size_t i = 0; i < obj["boxes"].size(); ++i) {
    json& b = obj["boxes"][i];
    const std::string where = at(join(path, "boxes"), i);
    if (!b.is_object()) {
      ck.fail(where, "expected an object");
      good = false;
      continue;
    }
    ck.known_keys(b, where, {"lower", "upper"});
    auto box = parse_box(ck, b, where, dim);
    if (box) E.boxes.push_back({box->first, box->second}); else good = false;
  }
  if (E.empty()) {
    ck.fail(path, "a set needs at least one ball or box");
    good = false;
  }
  if (!good) return std::nullopt;
  return E;
}

std::optional<PotentialSection> parse_potential(Checker& ck, json& root, int dim, bool with_kind) {
  json* obj = ck.object(root, "potential", "", true);
  if (!obj) return std::nullopt;
  const std::string path = "potential";
  if (with_kind)
    ck.known_keys(*obj, path, {"kind", "alpha", "s", "T", "eta", "rel_tol", "points"});
  else
    ck.known_keys(*obj, path, {"alpha", "s", "T", "eta"});
  PotentialSection sec;
  if (with_kind) {
    auto kind = ck.choice(*obj, "kind", path, {"wolff", "riesz", "frac_maximal", "bessel"}, std::string("wolff"));
    if (kind) {
      if (*kind == "wolff") sec.kind = PotentialKind::wolff;
      if (*kind == "riesz") sec.kind = PotentialKind::riesz;
      if (*kind == "frac_maximal") sec.kind = PotentialKind::frac_maximal;
      if (*kind == "bessel") sec.kind = PotentialKind::bessel;
    }
  }
  auto alpha = ck.number(*obj, "alpha", path, std::nullopt);
  auto s = ck.number(*obj, "s", path, 2.0);
  auto T = ck.number(*obj, "T", path, 1.0, Range{0.0, kInf, true, true});
  auto eta = ck.number(*obj, "eta", path, 0.0);
  if (with_kind) {
    auto tol = ck.number(*obj, "rel_tol", path, 1e-8, kPositive);
    if (tol) sec.rel_tol = *tol;
    if (obj->contains("points") && !(*obj)["points"].is_null()) {
      const json& pts = (*obj)["points"];
      if (!pts.is_array() || pts.empty()) {
        ck.fail(join(path, "points"), "expected a nonempty array of points or null");
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (auto x = ck.point(pts[i], at(join(path, "points"), i), dim)) sec.points.push_back(*x);
      }
    } else {
      (*obj)["points"] = nullptr;
    }
  }
  if (!alpha || !s || !T || !eta) return std::nullopt;
  sec.pp.dim = dim;
  sec.pp.alpha = *alpha;
  sec.pp.s = *s;
  sec.pp.T = *T;
  sec.pp.eta = *eta;
  return sec;
}

std::optional<ExpNonlinearity> parse_reaction(Checker& ck, json& root) {
  json* obj = ck.object(root, "reaction", "", true);
  if (!obj) return std::nullopt;
  ck.known_keys(*obj, "reaction", {"l", "a", "beta"});
  auto l = ck.integer(*obj, "l", "reaction", std::nullopt);
  auto a = ck.number(*obj, "a", "reaction", std::nullopt);
  auto beta = ck.number(*obj, "beta", "reaction", std::nullopt);
  if (!l || !a || !beta) return std::nullopt;
  return ExpNonlinearity{*l, *a, *beta};
}

std::optional<ProblemSpec> parse_solver(Checker& ck, json& root, const Grid& grid, const Measure& mu,
                                        const ExpNonlinearity& nl) {
  json* obj = ck.object(root, "solver", "", true);
  if (!obj) return std::nullopt;
  const std::string path = "solver";
  ck.known_keys(*obj, path,
                {"alpha", "p", "R", "epsilon", "K", "M_override", "delta0", "c", "support_radius", "max_iters", "tol",
                 "force", "initial", "forcing"});
  ProblemSpec sp;
  auto alpha = ck.number(*obj, "alpha", path, std::nullopt);
  auto p = ck.number(*obj, "p", path, std::nullopt);
  auto R = ck.number(*obj, "R", path, 1.0, Range{0.0, kInf, true, true});
  auto eps = ck.number(*obj, "epsilon", path, 1.0, kPositive);
  auto K = ck.number(*obj, "K", path, 1.0, kPositive);
  auto M = ck.nullable(*obj, "M_override", path, kPositive);
  auto delta0 = ck.number(*obj, "delta0", path, 1.0, kPositive);
  auto c = ck.number(*obj, "c", path, 1.0, kPositive);
  auto support = ck.number(*obj, "support_radius", path, 0.0, kNonNegative);
  auto iters = ck.integer(*obj, "max_iters", path, 200, 1, 1000000);
  auto tol = ck.number(*obj, "tol", path, 1e-8, kPositive);
  auto force = ck.boolean(*obj, "force", path, false);
  auto initial = ck.choice(*obj, "initial", path, {"forcing", "potential"}, std::string("forcing"));

  if (!obj->contains("forcing")) (*obj)["forcing"] = json{{"type", "zero"}};
  json& fobj = (*obj)["forcing"];
  const std::string fpath = join(path, "forcing");
  bool forcing_ok = true;
  if (!fobj.is_object()) {
    ck.fail(fpath, "expected an object");
    forcing_ok = false;
  } else if (auto type = ck.choice(fobj, "type", fpath, {"zero", "constant", "nodal"}, std::nullopt)) {
    if (*type == "zero") {
      ck.known_keys(fobj, fpath, {"type"});
    } else if (*type == "constant") {
      ck.known_keys(fobj, fpath, {"type", "value"});
      if (auto v = ck.number(fobj, "value", fpath, std::nullopt, kNonNegative))
        sp.f = Field::Constant(grid.size(), *v);
      else
        forcing_ok = false;
    } else {
      ck.known_keys(fobj, fpath, {"type", "values"});
      const json& vals = fobj.contains("values") ? fobj["values"] : json();
      if (!vals.is_array() || static_cast<Index>(vals.size()) != grid.size()) {
        ck.fail(join(fpath, "values"), "expected one nonnegative value per grid node (" + std::to_string(grid.size()) + ")");
        forcing_ok = false;
      } else {
        sp.f.resize(grid.size());
        for (Index i = 0; i < grid.size(); ++i) {
          auto v = ck.value(vals[i], at(join(fpath, "values"), i), kNonNegative);
          if (!v) forcing_ok = false;
          sp.f[i] = v.value_or(0.0);
        }
      }
    }
  } else {
    forcing_ok = false;
  }

  if (!alpha || !p || !R || !eps || !K || !M || !delta0 || !c || !support || !iters || !tol || !force || !initial ||
      !forcing_ok)
    return std::nullopt;
  sp.pp.dim = grid.dim();
  sp.pp.alpha = *alpha;
  sp.pp.s = *p;
  sp.pp.T = *R;
  sp.nl = nl;
  sp.mu = mu;
  sp.grid = grid;
  sp.epsilon = *eps;
  sp.K = *K;
  sp.M_override = *M;
  sp.delta0 = *delta0;
  sp.c_const = *c;
  sp.support_radius = *support;
  sp.max_iters = *iters;
  sp.tol = *tol;
  sp.force = *force;
  sp.initial = *initial == "potential" ? InitialGuess::potential : InitialGuess::forcing;
  return sp;
}

// Orlicz fields default from the solve when `derived` is given.
std::optional<CapacitySection> parse_capacity(Checker& ck, json& root, const Grid& grid, int dim,
                                              const std::optional<ProblemSpec>& derived) {
  json* obj = ck.object(root, "capacity", "", true);
  if (!obj) return std::nullopt;
  const std::string path = "capacity";
  ck.known_keys(*obj, path, {"sets", "p", "l", "beta", "alpha_p", "kernel", "grid", "max_iters", "gap_tol", "starts", "seed"});
  CapacitySection sec;
  bool good = true;
  if (!obj->contains("sets") || !(*obj)["sets"].is_array() || (*obj)["sets"].empty()) {
    ck.fail(join(path, "sets"), "expected a nonempty array of compact sets");
    good = false;
  } else {
    for (std::size_t i = 0; i < (*obj)["sets"].size(); ++i) {
      auto E = parse_set(ck, (*obj)["sets"][i], at(join(path, "sets"), i), dim);
      if (E) sec.sets.push_back(*E); else good = false;
    }
  }
  std::optional<double> def_p, def_beta, def_alpha_p;
  std::optional<int> def_l;
  if (derived) {
    def_p = derived->pp.s;
    def_l = derived->nl.l;
    def_beta = derived->nl.beta;
    def_alpha_p = derived->pp.alpha * derived->pp.s;
  }
  auto p = ck.number(*obj, "p", path, def_p);
  auto l = ck.integer(*obj, "l", path, def_l);
  auto beta = ck.number(*obj, "beta", path, def_beta);
  auto alpha_p = ck.number(*obj, "alpha_p", path, def_alpha_p);
  auto kernel = ck.choice(*obj, "kernel", path, {"bessel", "riesz"}, std::string("bessel"));
  std::optional<Grid> cgrid = grid;
  if (obj->contains("grid")) {
    if ((*obj)["grid"].is_object())
      cgrid = parse_grid(ck, (*obj)["grid"], join(path, "grid"), dim);
    else {
      ck.fail(join(path, "grid"), "expected an object");
      cgrid.reset();
    }
  } else {
    (*obj)["grid"] = root["grid"];
  }
  auto iters = ck.integer(*obj, "max_iters", path, 4000, 1, 10000000);
  auto gap = ck.number(*obj, "gap_tol", path, 1e-3, kPositive);
  auto starts = ck.integer(*obj, "starts", path, 2, 1, 64);
  auto seed = ck.integer(*obj, "seed", path, 1, 0, 2147483647L);
  if (!good || !p || !l || !beta || !alpha_p || !kernel || !cgrid || !iters || !gap || !starts || !seed)
    return std::nullopt;
  sec.p = *p;
  sec.l = *l;
  sec.beta = *beta;
  sec.alpha_p = *alpha_p;
  sec.kernel = *kernel == "riesz" ? KernelKind::riesz : KernelKind::bessel;
  sec.grid = *cgrid;
  sec.options.max_iters = *iters;
  sec.options.gap_tol = *gap;
  sec.options.seed = static_cast<std::uint64_t>(*seed);
  sec.starts = *starts;
  return sec;
}

const std::vector<std::string> kExperiments = {"sandwich", "exp_integrability", "composition_bound", "pde_surrogate",
                                               "necessary_condition"};

std::optional<VerifySection> parse_verify(Checker& ck, json& root, int dim) {
  json* obj = ck.object(root, "verify", "", true);
  if (!obj) return std::nullopt;
  const std::string path = "verify";
  VerifySection sec;
  auto experiment = ck.choice(*obj, "experiment", path, kExperiments, std::nullopt);
  if (!experiment) return std::nullopt;
  sec.experiment = *experiment;
  bool good = true;
  if (*experiment == "sandwich") {
    ck.known_keys(*obj, path, {"experiment", "q", "variant"});
    auto q = ck.number(*obj, "q", path, std::nullopt, kPositive);
    auto v = ck.choice(*obj, "variant", path, {"wolff_riesz", "wolff_bessel", "riesz_bessel"}, std::string("wolff_riesz"));
    if (!q || !v) return std::nullopt;
    sec.q = *q;
    if (*v == "wolff_bessel") sec.sandwich_variant = SandwichVariant::wolff_bessel;
    if (*v == "riesz_bessel") sec.sandwich_variant = SandwichVariant::riesz_bessel;
  } else if (*experiment == "exp_integrability") {
    ck.known_keys(*obj, path, {"experiment", "center", "radius", "delta"});
    auto c = ck.point_field(*obj, "center", path, dim);
    auto r = ck.number(*obj, "radius", path, std::nullopt, kPositive);
    auto d = ck.nullable(*obj, "delta", path, kPositive);
    if (!c || !r || !d) return std::nullopt;
    sec.center = *c;
    sec.radius = *r;
    sec.delta = *d;
  } else if (*experiment == "composition_bound") {
    ck.known_keys(*obj, path, {"experiment", "variant", "delta", "support_radius"});
    auto v = ck.choice(*obj, "variant", path, {"exp_sup", "exp_ratio", "truncated_exp_ratio"}, std::string("exp_sup"));
    auto d = ck.nullable(*obj, "delta", path, kPositive);
    auto s = ck.number(*obj, "support_radius", path, 1.0, kPositive);
    if (!v || !d || !s) return std::nullopt;
    if (*v == "exp_ratio") sec.composition_variant = CompositionVariant::exp_ratio;
    if (*v == "truncated_exp_ratio") sec.composition_variant = CompositionVariant::truncated_exp_ratio;
    sec.delta = *d;
    sec.support_radius = *s;
  } else if (*experiment == "pde_surrogate") {
    ck.known_keys(*obj, path,
                  {"experiment", "kind", "p", "k", "b", "beta", "background_M", "domain_diam", "K", "domain_box"});
    auto kind = ck.choice(*obj, "kind", path, {"p_laplace", "k_hessian"}, std::string("p_laplace"));
    auto p = ck.number(*obj, "p", path, 2.0);
    auto k = ck.integer(*obj, "k", path, 1);
    auto b = ck.number(*obj, "b", path, 0.0, kNonNegative);
    auto beta = ck.number(*obj, "beta", path, 1.0);
    auto bg = ck.number(*obj, "background_M", path, 0.0, kNonNegative);
    auto diam = ck.number(*obj, "domain_diam", path, std::nullopt, kPositive);
    auto K = ck.number(*obj, "K", path, 1.0, kPositive);
    if (!obj->contains("domain_box") || (*obj)["domain_box"].is_null()) {
      (*obj)["domain_box"] = nullptr;
    } else if (!(*obj)["domain_box"].is_object()) {
      ck.fail(join(path, "domain_box"), "expected an object or null");
      good = false;
    } else {
      ck.known_keys((*obj)["domain_box"], join(path, "domain_box"), {"lower", "upper"});
      auto box = parse_box(ck, (*obj)["domain_box"], join(path, "domain_box"), dim);
      if (box) sec.surrogate_options.domain_box = *box; else good = false;
    }
    if (!good || !kind || !p || !k || !b || !beta || !bg || !diam || !K) return std::nullopt;
    sec.surrogate = *kind == "k_hessian" ? SurrogateKind::k_hessian : SurrogateKind::p_laplace;
    sec.surrogate_options.p = *p;
    sec.surrogate_options.k = *k;
    sec.surrogate_options.b = *b;
    sec.surrogate_options.beta = *beta;
    sec.surrogate_options.background_M = *bg;
    sec.domain_diam = *diam;
    sec.K = *K;
  } else {
    ck.known_keys(*obj, path, {"experiment"});
  }
  return sec;
}

void check_output(Checker& ck, json& root, RunConfig& cfg, bool field_task) {
  if (!root.contains("output")) root["output"] = json::object();
  json& obj = root["output"];
  if (!obj.is_object()) {
    ck.fail("output", "expected an object");
    return;
  }
  ck.known_keys(obj, "output", {"report", "csv"});
  auto report = ck.choice(obj, "report", "output", {}, std::string("report.json"));
  if (report) cfg.report_path = *report;
  if (!obj.contains("csv")) obj["csv"] = field_task ? json("field.csv") : json(nullptr);
  if (obj["csv"].is_string())
    cfg.csv_path = obj["csv"].get<std::string>();
  else if (!obj["csv"].is_null())
    ck.fail("output.csv", "expected a file name or null");
  for (const auto& name : {cfg.report_path, cfg.csv_path.value_or("x")})
    if (name.empty() || name.find("..") != std::string::npos || name.front() == '/')
      ck.fail("output", "file names must be relative and stay inside the output directory");
}

// Admissibility of each task, run only on schema-clean configs.
void check_admissibility(Checker& ck, const RunConfig& cfg) {
  const int N = cfg.dim;
  if (cfg.potential && cfg.task == "potential") {
    const auto& pp = cfg.potential->pp;
    switch (cfg.potential->kind) {
      case PotentialKind::wolff: ck.admissible("potential", check_wolff_params(N, pp.alpha, pp.s)); break;
      case PotentialKind::riesz: ck.admissible("potential", check_riesz_params(N, pp.alpha)); break;
      case PotentialKind::frac_maximal: ck.admissible("potential", check_maximal_params(N, pp.alpha, pp.eta)); break;
      case PotentialKind::bessel:
        if (!(pp.alpha > 0.0)) ck.admissible("potential", {violation("alpha_range", "alpha > 0", "alpha <= 0")});
        break;
    }
  }
  if (cfg.problem)
    for (const auto& d : validate_problem(*cfg.problem))
      ck.admissible(d.code.rfind("reaction_", 0) == 0 ? "reaction" : "solver", {d});
  if (cfg.capacity) {
    const auto& c = *cfg.capacity;
    ck.admissible("capacity", check_orlicz_pair(c.p, c.l, c.beta));
    if (c.kernel == KernelKind::riesz)
      ck.admissible("capacity", check_riesz_params(N, c.alpha_p));
    else if (!(c.alpha_p > 0.0))
      ck.admissible("capacity", {violation("alpha_range", "alpha > 0", "alpha_p <= 0")});
  }
  if (!cfg.verify) return;
  const auto& v = *cfg.verify;
  if (v.experiment == "sandwich" || v.experiment == "exp_integrability" || v.experiment == "composition_bound") {
    const auto& pp = cfg.potential->pp;
    ck.admissible("potential", check_wolff_params(N, pp.alpha, pp.s));
    if (v.experiment == "sandwich" && v.sandwich_variant == SandwichVariant::riesz_bessel && !(v.q >= 1.0))
      ck.admissible("verify.q", {violation("q_range", "q >= 1", "q below 1")});
    else if (v.experiment == "sandwich" && v.sandwich_variant != SandwichVariant::riesz_bessel && pp.s > 1.0 &&
             !(v.q >= pp.s - 1.0))
      ck.admissible("verify.q", {violation("q_range", "q >= p-1", "q below p-1")});
    if (v.experiment == "exp_integrability" && !(pp.eta >= 0.0 && pp.eta < pp.s - 1.0))
      ck.admissible("potential.eta", {violation("eta_range", "0 <= eta < p-1", "eta outside [0, p-1)")});
    if (v.experiment == "composition_bound") {
      ck.admissible("reaction", check_reaction(*cfg.reaction));
      const bool untruncated = v.composition_variant == CompositionVariant::truncated_exp_ratio;
      if (untruncated != std::isinf(pp.T))
        ck.admissible("potential.T", {violation("truncation", "T = inf exactly for truncated_exp_ratio",
                                                "variant and T disagree")});
    }
  }
  if (v.experiment == "pde_surrogate") {
    if (v.surrogate == SurrogateKind::k_hessian)
      ck.admissible("verify", check_k_hessian_dimension(N, v.surrogate_options.k));
    else
      ck.admissible("verify", check_p_laplace_dimension(N, v.surrogate_options.p));
    if (!(v.surrogate_options.beta >= 1.0))
      ck.admissible("verify.beta", {violation("reaction_beta", "beta>=1", "beta below 1")});
  }
}

}  // namespace

Validation validate_config(const json& input) {
  Validation out;
  out.effective = input;
  Checker ck;
  json& root = out.effective;
  if (!root.is_object()) {
    ck.fail("", "config must be a JSON object");
    out.issues = ck.issues;
    return out;
  }
  ck.known_keys(root, "",
                {"version", "task", "dimension", "grid", "measure", "potential", "reaction", "solver", "capacity",
                 "verify", "output"});
  auto version = ck.integer(root, "version", "", std::nullopt, kConfigVersion, kConfigVersion);
  auto task = ck.choice(root, "task", "", {"potential", "solve", "capacity", "verify"}, std::nullopt);
  auto dim = ck.integer(root, "dimension", "", std::nullopt, 1, 6);
  if (!version || !task || !dim) {
    out.issues = ck.issues;
    return out;
  }
  RunConfig cfg;
  cfg.task = *task;
  cfg.dim = *dim;
  json* gobj = ck.object(root, "grid", "", true);
  std::optional<Grid> grid = gobj ? parse_grid(ck, *gobj, "grid", *dim) : std::nullopt;
  auto measure = parse_measure(ck, root, *dim);

  std::string experiment;
  if (*task == "verify") {
    if (auto v = parse_verify(ck, root, *dim)) {
      experiment = v->experiment;
      cfg.verify = v;
    }
  }
  const bool needs_potential = *task == "potential" || experiment == "sandwich" ||
                               experiment == "exp_integrability" || experiment == "composition_bound";
  const bool needs_reaction = *task == "solve" || experiment == "composition_bound" || experiment == "necessary_condition";
  const bool needs_solver = *task == "solve" || experiment == "necessary_condition";
  const bool needs_capacity = *task == "capacity" || experiment == "necessary_condition";
  if (needs_potential) cfg.potential = parse_potential(ck, root, *dim, *task == "potential");
  if (needs_reaction) cfg.reaction = parse_reaction(ck, root);
  if (needs_solver && grid && measure && cfg.reaction)
    cfg.problem = parse_solver(ck, root, *grid, *measure, *cfg.reaction);
  if (needs_capacity && grid)
    cfg.capacity = parse_capacity(ck, root, *grid, *dim,
                                  experiment == "necessary_condition" ? cfg.problem : std::nullopt);
  // Sections the task does not read are rejected so typos cannot hide.
  const std::vector<std::pair<const char*, bool>> sections = {{"potential", needs_potential},
                                                              {"reaction", needs_reaction},
                                                              {"solver", needs_solver},
                                                              {"capacity", needs_capacity},
                                                              {"verify", *task == "verify"}};
  for (const auto& [name, used] : sections)
    if (!used && root.contains(name)) ck.fail(name, "section is not used by task '" + *task + "'");
  check_output(ck, root, cfg, *task == "potential" || *task == "solve" || experiment == "pde_surrogate");

  if (!ck.ok() || !grid || !measure) {
    if (ck.ok()) ck.fail("", "config is incomplete");
    out.issues = ck.issues;
    return out;
  }
  cfg.grid = *grid;
  cfg.measure = *measure;
  check_admissibility(ck, cfg);
  out.issues = ck.issues;
  out.config = std::move(cfg);
  return out;
}

}  // namespace wolffpot::cli
