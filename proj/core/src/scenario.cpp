// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include "leafindex/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

#include "leafindex/error.hpp"

namespace leafindex {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::validation, fmt::format("{}: {}", field, what));
}

template <class T>
T read(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(ErrorKind::validation,
         fmt::format("{} (line {}): cannot read value '{}'", field, node.Mark().line + 1,
                     node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")));
  }
}

template <class T>
void maybe(const YAML::Node& parent, const char* key, const std::string& prefix, T& out) {
  if (const YAML::Node n = parent[key]) out = read<T>(n, prefix + key);
}

void check_keys(const YAML::Node& node, const std::string& prefix, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) field_error(prefix.empty() ? "scenario" : prefix.substr(0, prefix.size() - 1), "expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key))
      fail(ErrorKind::validation, fmt::format("{}{} (line {}): unknown field", prefix, key, kv.first.Mark().line + 1));
  }
}

Scenario base(const std::string& name) {
  Scenario s;
  s.name = name;
  s.fiber = FiberModel{FiberModel::Kind::torus, 2, 8, 20};
  s.seed = 1;
  s.seed_given = true;
  return s;
}

Scenario s1(int d) {
  Scenario s = base(d < 0 ? fmt::format("S1-dolbeault-dm{}", -d) : fmt::format("S1-dolbeault-d{}", d));
  s.op.kind = "dolbeault";
  s.op.twist_degree = d;
  return s;
}

Scenario s2() {
  Scenario s = base("S2-free-z2-d2");
  s.groupoid.type = "cyclic";
  s.groupoid.order = 2;
  s.fiber_action = {FiberActionSpec{{}, {"1/2", "0"}}};
  s.op.twist_degree = 2;
  s.quotient_oracle = true;
  return s;
}

Scenario s3() {
  Scenario s = base("S3-invertible-multiplier");
  s.groupoid.type = "cyclic";
  s.groupoid.order = 3;
  s.fiber = FiberModel{FiberModel::Kind::circle, 1, 8, 21};
  s.fiber_action = {FiberActionSpec{{}, {"1/3"}}};
  s.op.kind = "multiplier";
  s.op.symbol = "nu + 1/2";
  s.op.order = 1.0;
  return s;
}

Scenario s4() {
  Scenario s = base("S4-dbar-area");
  s.fiber = FiberModel{FiberModel::Kind::torus, 2, 16, 34};
  s.op.kind = "dbar";
  s.cocycle.kind = "area";
  s.cocycle.degree = 2;
  s.heat_exponent = 16.0;
  s.localization = 0.5;
  return s;
}

Scenario s5() {
  Scenario s = base("S5-orbifold-family");
  s.groupoid.type = "cyclic";
  s.groupoid.order = 2;
  s.groupoid.base_size = 4;
  s.groupoid.base_action = {{1, 0, 3, 2}};
  s.fiber_action = {FiberActionSpec{}};
  s.op.twist_degree = 1;
  s.op.perturbation = 0.1;
  s.family = true;
  return s;
}

std::vector<Scenario> catalog() {
  std::vector<Scenario> out;
  for (int d = -2; d <= 2; ++d) out.push_back(s1(d));
  out.push_back(s2());
  out.push_back(s3());
  out.push_back(s4());
  out.push_back(s5());
  return out;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& s : catalog()) names.push_back(s.name);
  return names;
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  for (auto& s : catalog())
    if (s.name == name) return s;
  return std::nullopt;
}

std::string builtin_description(const std::string& name) {
  if (name.rfind("S1-", 0) == 0) return "twisted Dolbeault operator on T^2, trivial group, unit cocycle";
  if (name.rfind("S2-", 0) == 0) return "free Z/2 half-shift on T^2, even twist, quotient-operator oracle";
  if (name.rfind("S3-", 0) == 0) return "invertible multiplier on S^1 with free Z/3 rotation (zero class)";
  if (name.rfind("S4-", 0) == 0) return "dbar on T^2 paired with the area cocycle (degree 2)";
  if (name.rfind("S5-", 0) == 0) return "orbifold family over 4 base points with Z/2 identification";
  return "";
}

void validate_scenario(const Scenario& s) {
  if (s.name.empty()) field_error("name", "must be non-empty");
  if (!s.seed_given) field_error("seed", "required for reproducibility");
  const GroupSpec& g = s.groupoid;
  if (g.type != "trivial" && g.type != "cyclic") field_error("groupoid.group", fmt::format("unknown type '{}'", g.type));
  if (g.type == "trivial" && g.order != 1) field_error("groupoid.order", "the trivial group has order 1");
  if (g.order < 1 || g.order > 64) field_error("groupoid.order", "must be in 1..64");
  if (g.base_size < 1 || g.base_size > kMaxBase) field_error("groupoid.base_size", fmt::format("must be in 1..{}", kMaxBase));
  if (!g.base_weights.empty() && static_cast<int>(g.base_weights.size()) != g.base_size)
    field_error("groupoid.base_weights", "one weight per base point");
  for (double w : g.base_weights)
    if (!(w > 0.0)) field_error("groupoid.base_weights", "weights must be positive");
  const int ngen = g.type == "cyclic" ? 1 : 0;
  if (!g.base_action.empty() && static_cast<int>(g.base_action.size()) != ngen)
    field_error("groupoid.base_action", "one permutation per generator");
  for (const auto& perm : g.base_action) {
    if (static_cast<int>(perm.size()) != g.base_size) field_error("groupoid.base_action", "permutation length != base_size");
    std::set<int> seen(perm.begin(), perm.end());
    if (static_cast<int>(seen.size()) != g.base_size || *seen.begin() != 0 || *seen.rbegin() != g.base_size - 1)
      field_error("groupoid.base_action", "not a permutation of the base points");
  }

  const FiberModel& f = s.fiber;
  if (f.kind == FiberModel::Kind::circle && f.dim != 1) field_error("fiber.dim", "a circle has dim 1");
  if (f.dim < 1 || f.dim > 2) field_error("fiber.dim", "must be 1 or 2");
  if (f.cutoff < 1 || f.cutoff > kMaxCutoff) field_error("fiber.fourier_cutoff", fmt::format("must be in 1..{}", kMaxCutoff));
  if (f.grid > kMaxGrid) field_error("fiber.grid", fmt::format("must be <= {}", kMaxGrid));
  if (f.grid < 2 * f.cutoff + 2)
    field_error("fiber.grid", fmt::format("{} < 2N+2 = {}: quadrature is no longer exact for band 2N", f.grid,
                                          2 * f.cutoff + 2));
  if (!s.fiber_action.empty() && static_cast<int>(s.fiber_action.size()) != ngen)
    field_error("fiber.action", "one affine map per generator");
  for (const auto& m : s.fiber_action) {
    if (!m.matrix.empty()) {
      if (static_cast<int>(m.matrix.size()) != f.dim) field_error("fiber.action.matrix", "must be dim x dim");
      for (const auto& row : m.matrix)
        if (static_cast<int>(row.size()) != f.dim) field_error("fiber.action.matrix", "must be dim x dim");
    }
    if (!m.translation.empty() && static_cast<int>(m.translation.size()) != f.dim)
      field_error("fiber.action.translation", "one entry per fiber dimension");
  }

  const auto& op = s.op;
  static const std::set<std::string> kinds{"dolbeault", "dbar", "circle_derivative", "multiplier", "coefficients"};
  if (!kinds.count(op.kind)) field_error("operator.kind", fmt::format("unknown kind '{}'", op.kind));
  if ((op.kind == "dolbeault" || op.kind == "dbar") && f.dim != 2) field_error("operator.kind", "needs a 2-torus fiber");
  if (op.kind == "circle_derivative" && f.dim != 1) field_error("operator.kind", "needs a circle fiber");
  if (op.kind == "dolbeault" && std::abs(op.twist_degree) > f.cutoff)
    field_error("operator.twist_degree", "must not exceed the Fourier cutoff");
  if (op.kind == "multiplier" && op.symbol.empty()) field_error("operator.symbol", "required for a multiplier");
  if (op.kind == "coefficients" && (op.file.empty() || op.model.empty()))
    field_error("operator.file", "coefficient operators need 'file' and 'model'");
  if (op.perturbation < 0.0 || op.perturbation >= 1.0) field_error("operator.perturbation", "must be in [0, 1)");

  const auto& c = s.cocycle;
  if (c.kind != "unit" && c.kind != "area" && c.kind != "elementary")
    field_error("cocycle.kind", fmt::format("unknown kind '{}'", c.kind));
  if (c.degree < 0 || c.degree % 2 || c.degree > f.dim) field_error("cocycle.degree", "must be even and <= fiber dim");
  if (c.kind == "unit" && c.degree != 0) field_error("cocycle.degree", "the unit cocycle has degree 0");
  if (c.kind == "area" && (c.degree != 2 || f.dim != 2)) field_error("cocycle.degree", "the area cocycle has degree 2 on T^2");
  if (c.kind == "elementary" && static_cast<int>(c.factors.size()) != c.degree + 1)
    field_error("cocycle.factors", "degree + 1 factors are required");
  if (!(c.germ_radius > 0.0)) field_error("cocycle.germ_radius", "must be positive");

  if (!s.density.values.empty() && static_cast<int>(s.density.values.size()) != g.base_size)
    field_error("density.values", "one value per base point");
  for (double v : s.density.values)
    if (!(v > 0.0)) field_error("density.values", "must be positive");
  if (!(s.pairing_tol > 0.0)) field_error("tolerances.pairing_tol", "must be positive");
  if (!(s.invariant_tol > 0.0)) field_error("tolerances.invariant_tol", "must be positive");
  if (!(s.heat_exponent > 0.0)) field_error("parametrix.heat_exponent", "must be positive");
  if (s.localization < 0.0) field_error("localization", "must be nonnegative");
  if (s.quotient_oracle && (op.kind != "dolbeault" || g.order != 2))
    field_error("checks.quotient_oracle", "available for Dolbeault operators under Z/2");
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorKind::validation, fmt::format("{}: parse error at line {}, column {}: {}", source, e.mark.line + 1,
                                            e.mark.column + 1, e.msg));
  }
  if (const YAML::Node b = root["builtin"]) {
    auto s = builtin_scenario(read<std::string>(b, "builtin"));
    if (!s) fail(ErrorKind::validation, fmt::format("builtin: unknown scenario '{}'", b.Scalar()));
    return *s;
  }
  check_keys(root, "", {"name", "seed", "groupoid", "fiber", "operator", "cocycle", "density", "tolerances",
                        "parametrix", "localization", "checks"});
  Scenario s;
  s.source = source;
  maybe(root, "name", "", s.name);
  if (const YAML::Node n = root["seed"]) {
    s.seed = read<std::uint64_t>(n, "seed");
    s.seed_given = true;
  }
  if (const YAML::Node g = root["groupoid"]) {
    check_keys(g, "groupoid.", {"group", "order", "base_size", "base_weights", "base_action"});
    maybe(g, "group", "groupoid.", s.groupoid.type);
    maybe(g, "order", "groupoid.", s.groupoid.order);
    maybe(g, "base_size", "groupoid.", s.groupoid.base_size);
    maybe(g, "base_weights", "groupoid.", s.groupoid.base_weights);
    maybe(g, "base_action", "groupoid.", s.groupoid.base_action);
  }
  if (const YAML::Node f = root["fiber"]) {
    check_keys(f, "fiber.", {"kind", "dim", "fourier_cutoff", "grid", "action"});
    std::string kind = "torus";
    maybe(f, "kind", "fiber.", kind);
    if (kind != "torus" && kind != "circle") field_error("fiber.kind", fmt::format("unknown kind '{}'", kind));
    s.fiber.kind = kind == "circle" ? FiberModel::Kind::circle : FiberModel::Kind::torus;
    s.fiber.dim = kind == "circle" ? 1 : 2;
    maybe(f, "dim", "fiber.", s.fiber.dim);
    maybe(f, "fourier_cutoff", "fiber.", s.fiber.cutoff);
    s.fiber.grid = 2 * s.fiber.cutoff + 4;
    maybe(f, "grid", "fiber.", s.fiber.grid);
    if (const YAML::Node a = f["action"]) {
      if (!a.IsSequence()) field_error("fiber.action", "expected a list of affine maps");
      for (const auto& m : a) {
        check_keys(m, "fiber.action.", {"matrix", "translation"});
        FiberActionSpec spec;
        maybe(m, "matrix", "fiber.action.", spec.matrix);
        maybe(m, "translation", "fiber.action.", spec.translation);
        s.fiber_action.push_back(spec);
      }
    }
  }
  if (const YAML::Node o = root["operator"]) {
    check_keys(o, "operator.", {"kind", "twist_degree", "symbol", "order", "file", "model", "perturbation"});
    maybe(o, "kind", "operator.", s.op.kind);
    maybe(o, "twist_degree", "operator.", s.op.twist_degree);
    maybe(o, "symbol", "operator.", s.op.symbol);
    maybe(o, "order", "operator.", s.op.order);
    maybe(o, "file", "operator.", s.op.file);
    maybe(o, "model", "operator.", s.op.model);
    maybe(o, "perturbation", "operator.", s.op.perturbation);
    if (!s.op.file.empty() && std::filesystem::path(s.op.file).is_relative() && source != "<string>")
      s.op.file = (std::filesystem::path(source).parent_path() / s.op.file).string();
  }
  if (const YAML::Node c = root["cocycle"]) {
    check_keys(c, "cocycle.", {"kind", "degree", "factors", "germ_radius"});
    maybe(c, "kind", "cocycle.", s.cocycle.kind);
    if (s.cocycle.kind == "area") s.cocycle.degree = 2;
    maybe(c, "degree", "cocycle.", s.cocycle.degree);
    maybe(c, "factors", "cocycle.", s.cocycle.factors);
    maybe(c, "germ_radius", "cocycle.", s.cocycle.germ_radius);
  }
  if (const YAML::Node d = root["density"]) {
    check_keys(d, "density.", {"values", "invariant"});
    maybe(d, "values", "density.", s.density.values);
    maybe(d, "invariant", "density.", s.density.invariant);
  }
  if (const YAML::Node t = root["tolerances"]) {
    check_keys(t, "tolerances.", {"pairing_tol", "invariant_tol"});
    maybe(t, "pairing_tol", "tolerances.", s.pairing_tol);
    maybe(t, "invariant_tol", "tolerances.", s.invariant_tol);
  }
  if (const YAML::Node p = root["parametrix"]) {
    check_keys(p, "parametrix.", {"heat_exponent"});
    maybe(p, "heat_exponent", "parametrix.", s.heat_exponent);
  }
  maybe(root, "localization", "", s.localization);
  if (const YAML::Node k = root["checks"]) {
    check_keys(k, "checks.", {"quotient_oracle", "family"});
    maybe(k, "quotient_oracle", "checks.", s.quotient_oracle);
    maybe(k, "family", "checks.", s.family);
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open scenario '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

Scenario load_scenario(const std::string& name_or_path) {
  if (auto s = builtin_scenario(name_or_path)) return *s;
  if (!std::filesystem::exists(name_or_path))
    fail(ErrorKind::validation, fmt::format("'{}' is neither a builtin scenario nor a file", name_or_path));
  return load_scenario_file(name_or_path);
}

std::string echo_scenario(const Scenario& s) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << s.name;
  e << YAML::Key << "seed" << YAML::Value << s.seed;
  e << YAML::Key << "groupoid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "group" << YAML::Value << s.groupoid.type;
  e << YAML::Key << "order" << YAML::Value << s.groupoid.order;
  e << YAML::Key << "base_size" << YAML::Value << s.groupoid.base_size;
  if (!s.groupoid.base_weights.empty())
    e << YAML::Key << "base_weights" << YAML::Value << YAML::Flow << s.groupoid.base_weights;
  if (!s.groupoid.base_action.empty())
    e << YAML::Key << "base_action" << YAML::Value << YAML::Flow << s.groupoid.base_action;
  e << YAML::EndMap;
  e << YAML::Key << "fiber" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << (s.fiber.kind == FiberModel::Kind::circle ? "circle" : "torus");
  e << YAML::Key << "dim" << YAML::Value << s.fiber.dim;
  e << YAML::Key << "fourier_cutoff" << YAML::Value << s.fiber.cutoff;
  e << YAML::Key << "grid" << YAML::Value << s.fiber.grid;
  if (!s.fiber_action.empty()) {
    e << YAML::Key << "action" << YAML::Value << YAML::BeginSeq;
    for (const auto& m : s.fiber_action) {
      e << YAML::BeginMap;
      if (!m.matrix.empty()) e << YAML::Key << "matrix" << YAML::Value << YAML::Flow << m.matrix;
      if (!m.translation.empty()) e << YAML::Key << "translation" << YAML::Value << YAML::Flow << m.translation;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
  e << YAML::Key << "operator" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << s.op.kind;
  if (s.op.kind == "dolbeault") e << YAML::Key << "twist_degree" << YAML::Value << s.op.twist_degree;
  if (!s.op.symbol.empty()) e << YAML::Key << "symbol" << YAML::Value << s.op.symbol;
  if (s.op.kind == "multiplier") e << YAML::Key << "order" << YAML::Value << s.op.order;
  if (!s.op.file.empty()) e << YAML::Key << "file" << YAML::Value << s.op.file;
  if (!s.op.model.empty()) e << YAML::Key << "model" << YAML::Value << s.op.model;
  e << YAML::Key << "perturbation" << YAML::Value << s.op.perturbation;
  e << YAML::EndMap;
  e << YAML::Key << "cocycle" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << s.cocycle.kind;
  e << YAML::Key << "degree" << YAML::Value << s.cocycle.degree;
  if (!s.cocycle.factors.empty()) e << YAML::Key << "factors" << YAML::Value << YAML::Flow << s.cocycle.factors;
  e << YAML::Key << "germ_radius" << YAML::Value << s.cocycle.germ_radius;
  e << YAML::EndMap;
  e << YAML::Key << "density" << YAML::Value << YAML::BeginMap;
  if (s.density.values.empty())
    e << YAML::Comment("values omitted: uniform, mass 1 on the orbit space");
  else
    e << YAML::Key << "values" << YAML::Value << YAML::Flow << s.density.values;
  e << YAML::Key << "invariant" << YAML::Value << s.density.invariant;
  e << YAML::EndMap;
  e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "pairing_tol" << YAML::Value << s.pairing_tol;
  e << YAML::Key << "invariant_tol" << YAML::Value << s.invariant_tol;
  e << YAML::EndMap;
  e << YAML::Key << "parametrix" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "heat_exponent" << YAML::Value << s.heat_exponent;
  e << YAML::EndMap;
  e << YAML::Key << "localization" << YAML::Value << s.localization;
  e << YAML::Key << "checks" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "quotient_oracle" << YAML::Value << s.quotient_oracle;
  e << YAML::Key << "family" << YAML::Value << s.family;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return fmt::format("# source: {}\n{}\n", s.source, e.c_str());
}

FiberedGSpace build_space(const Scenario& s) {
  validate_scenario(s);
  BaseModel base = BaseModel::uniform(s.groupoid.base_size);
  if (!s.groupoid.base_weights.empty()) base.weights = s.groupoid.base_weights;
  const FiniteGroup group = s.groupoid.type == "cyclic" ? FiniteGroup::cyclic(s.groupoid.order) : FiniteGroup::trivial();
  const int ngen = static_cast<int>(group.generators.size());
  std::vector<std::vector<int>> base_action = s.groupoid.base_action;
  if (base_action.empty())
    for (int k = 0; k < ngen; ++k) {
      std::vector<int> id(s.groupoid.base_size);
      for (int x = 0; x < s.groupoid.base_size; ++x) id[x] = x;
      base_action.push_back(id);
    }
  std::vector<AffineMap> maps;
  for (int k = 0; k < ngen; ++k) {
    AffineMap m = AffineMap::identity(s.fiber.dim);
    if (k < static_cast<int>(s.fiber_action.size())) {
      const auto& spec = s.fiber_action[k];
      for (std::size_t i = 0; i < spec.matrix.size(); ++i)
        for (std::size_t j = 0; j < spec.matrix[i].size(); ++j) m.A(i, j) = spec.matrix[i][j];
      for (std::size_t i = 0; i < spec.translation.size(); ++i) m.theta[i] = mod_one(parse_rational(spec.translation[i]));
    }
    maps.push_back(m);
  }
  return FiberedGSpace::from_group(group, base, base_action, s.fiber, maps);
}

}  // namespace leafindex
