#include "heatgen/space_catalog.hpp"

#include "heatgen/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace heatgen {

using nlohmann::json;

SpaceSpec sphere(std::size_t n) {
  SpaceSpec s;
  s.name = "S" + std::to_string(n);
  s.n = n;
  s.p = n * (n - 1) / 2;
  s.g = RationalMatrix::identity(n);
  s.beta = RationalMatrix::identity(s.p);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = c + 1; d < n; ++d) {
      RationalMatrix e(n, n);
      e(c, d) = 1;
      e(d, c) = -1;
      s.E.push_back(std::move(e));
    }
  return s;
}

SpaceSpec flat(std::size_t n) {
  SpaceSpec s;
  s.name = "flat" + std::to_string(n);
  s.n = n;
  s.p = 0;
  s.g = RationalMatrix::identity(n);
  s.beta = RationalMatrix(0, 0);
  return s;
}

SpaceSpec direct_product(const SpaceSpec &first, const SpaceSpec &second) {
  SpaceSpec s;
  s.name = first.name + "x" + second.name;
  s.n = first.n + second.n;
  s.p = first.p + second.p;
  s.g = RationalMatrix(s.n, s.n);
  for (std::size_t a = 0; a < first.n; ++a)
    for (std::size_t b = 0; b < first.n; ++b)
      s.g(a, b) = first.g(a, b);
  for (std::size_t a = 0; a < second.n; ++a)
    for (std::size_t b = 0; b < second.n; ++b)
      s.g(first.n + a, first.n + b) = second.g(a, b);
  s.beta = RationalMatrix(s.p, s.p);
  for (std::size_t i = 0; i < first.p; ++i)
    for (std::size_t k = 0; k < first.p; ++k)
      s.beta(i, k) = first.beta(i, k);
  for (std::size_t i = 0; i < second.p; ++i)
    for (std::size_t k = 0; k < second.p; ++k)
      s.beta(first.p + i, first.p + k) = second.beta(i, k);
  for (const auto &e : first.E) {
    RationalMatrix big(s.n, s.n);
    for (std::size_t a = 0; a < first.n; ++a)
      for (std::size_t b = 0; b < first.n; ++b)
        big(a, b) = e(a, b);
    s.E.push_back(std::move(big));
  }
  for (const auto &e : second.E) {
    RationalMatrix big(s.n, s.n);
    for (std::size_t a = 0; a < second.n; ++a)
      for (std::size_t b = 0; b < second.n; ++b)
        big(first.n + a, first.n + b) = e(a, b);
    s.E.push_back(std::move(big));
  }
  return s;
}

SpaceSpec builtin(const std::string &name) {
  static const std::regex sphere_re("S([2-6])");
  static const std::regex flat_re(R"(flat\(?([1-9][0-9]?)\)?)");
  std::smatch m;
  if (std::regex_match(name, m, sphere_re))
    return sphere(std::stoul(m[1]));
  if (std::regex_match(name, m, flat_re))
    return flat(std::stoul(m[1]));
  if (name == "S2xS2")
    return direct_product(sphere(2), sphere(2));
  if (name == "S2xS3")
    return direct_product(sphere(2), sphere(3));
  throw UnknownSpace("unknown builtin space '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"S2", "S3", "S4", "S5", "S6", "S2xS2", "S2xS3", "flat1", "flat2", "flat3", "flat4"};
}

std::vector<SpaceSpec> split_product(const SpaceSpec &spec) {
  const auto n = spec.n;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !is_zero(spec.g(a, b)))
        unite(a, b);
      for (const auto &e : spec.E)
        if (!is_zero(e(a, b)))
          unite(a, b);
    }

  // Blocks in order of their smallest tangent index.
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(n);
  {
    std::vector<std::ptrdiff_t> root_block(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
      const auto r = find(a);
      if (root_block[r] < 0) {
        root_block[r] = static_cast<std::ptrdiff_t>(blocks.size());
        blocks.emplace_back();
      }
      block_of[a] = static_cast<std::size_t>(root_block[r]);
      blocks[block_of[a]].push_back(a);
    }
  }
  if (blocks.size() < 2)
    return {spec};

  std::vector<std::size_t> gen_block(spec.p);
  for (std::size_t i = 0; i < spec.p; ++i) {
    std::set<std::size_t> touched;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!is_zero(spec.E[i](a, b)))
          touched.insert(block_of[a]);
    if (touched.size() != 1)
      return {spec};
    gen_block[i] = *touched.begin();
  }
  for (std::size_t i = 0; i < spec.p; ++i)
    for (std::size_t k = 0; k < spec.p; ++k)
      if (gen_block[i] != gen_block[k] && !is_zero(spec.beta(i, k)))
        return {spec};

  std::vector<SpaceSpec> factors;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto &idx = blocks[bi];
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < spec.p; ++i)
      if (gen_block[i] == bi)
        gens.push_back(i);
    SpaceSpec f;
    f.name = spec.name + "[" + std::to_string(bi) + "]";
    f.n = idx.size();
    f.p = gens.size();
    f.g = RationalMatrix(f.n, f.n);
    for (std::size_t a = 0; a < f.n; ++a)
      for (std::size_t b = 0; b < f.n; ++b)
        f.g(a, b) = spec.g(idx[a], idx[b]);
    f.beta = RationalMatrix(f.p, f.p);
    for (std::size_t i = 0; i < f.p; ++i)
      for (std::size_t k = 0; k < f.p; ++k)
        f.beta(i, k) = spec.beta(gens[i], gens[k]);
    for (auto i : gens) {
      RationalMatrix e(f.n, f.n);
      for (std::size_t a = 0; a < f.n; ++a)
        for (std::size_t b = 0; b < f.n; ++b)
          e(a, b) = spec.E[i](idx[a], idx[b]);
      f.E.push_back(std::move(e));
    }
    factors.push_back(std::move(f));
  }
  return factors;
}

namespace {

std::size_t line_of_offset(const std::string &text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string &text, const std::string &key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

class FieldReader {
public:
  explicit FieldReader(const std::string &text) : text_(text) {}

  [[noreturn]] void fail(const std::string &top_key, const std::string &field, const std::string &msg) const {
    const auto line = line_of_key(text_, top_key);
    std::string what = "field '" + field + "'";
    if (line)
      what += " (line " + std::to_string(line) + ")";
    throw ParseError(what + ": " + msg, line, field);
  }

  Rational rational(const json &j, const std::string &top_key, const std::string &field) const {
    if (!j.is_string())
      fail(top_key, field, "expected a rational string \"p/q\"");
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument &e) {
      fail(top_key, field, e.what());
    }
  }

  RationalMatrix matrix(const json &j, std::size_t rows, std::size_t cols, const std::string &top_key,
                        const std::string &field) const {
    if (!j.is_array() || j.size() != rows)
      fail(top_key, field, "expected " + std::to_string(rows) + " rows");
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row_field = field + "[" + std::to_string(r) + "]";
      if (!j[r].is_array() || j[r].size() != cols)
        fail(top_key, row_field, "expected " + std::to_string(cols) + " columns");
      for (std::size_t c = 0; c < cols; ++c)
        m(r, c) = rational(j[r][c], top_key, row_field + "[" + std::to_string(c) + "]");
    }
    return m;
  }

  std::size_t count(const json &j, const std::string &key) const {
    if (!j.is_number_integer() || j.get<long long>() < 0)
      fail(key, key, "expected a non-negative integer");
    return static_cast<std::size_t>(j.get<long long>());
  }

private:
  const std::string &text_;
};

void write_matrix(std::ostream &os, const RationalMatrix &m, const std::string &indent) {
  os << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ",\n" + indent + " [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << (c ? ", " : "") << '"' << to_string(m(r, c)) << '"';
    os << "]";
  }
  os << "]";
}

} // namespace

SpaceSpec parse_space(const std::string &text, const LoadOptions &options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    const auto line = line_of_offset(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }
  if (!doc.is_object())
    throw ParseError("space file must be a JSON object", 1);

  const FieldReader rd(text);
  static const std::set<std::string> known = {"schema_version", "name", "n", "p", "g", "beta", "E"};
  for (const auto &[key, value] : doc.items())
    if (!known.count(key))
      rd.fail(key, key, "unknown field");
  for (const auto &key : known)
    if (!doc.contains(key))
      throw ParseError("missing required field '" + key + "'", 0, key);

  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<long long>() != kSpaceFileSchemaVersion)
    rd.fail("schema_version", "schema_version",
            "unsupported schema version (expected " + std::to_string(kSpaceFileSchemaVersion) + ")");
  if (!doc["name"].is_string())
    rd.fail("name", "name", "expected a string");

  SpaceSpec s;
  s.name = doc["name"].get<std::string>();
  s.n = rd.count(doc["n"], "n");
  s.p = rd.count(doc["p"], "p");
  if (s.n == 0)
    rd.fail("n", "n", "tangent dimension must be positive");
  if (s.p > s.n * (s.n - 1) / 2)
    rd.fail("p", "p", "p exceeds n(n-1)/2");
  s.g = rd.matrix(doc["g"], s.n, s.n, "g", "g");
  s.beta = rd.matrix(doc["beta"], s.p, s.p, "beta", "beta");
  const json &gens = doc["E"];
  if (!gens.is_array() || gens.size() != s.p)
    rd.fail("E", "E", "expected " + std::to_string(s.p) + " generators");
  for (std::size_t i = 0; i < s.p; ++i) {
    const auto field = "E[" + std::to_string(i) + "]";
    s.E.push_back(rd.matrix(gens[i], s.n, s.n, "E", field));
    if (!s.E.back().is_antisymmetric())
      rd.fail("E", field, "generator " + std::to_string(i) + " is not antisymmetric");
  }
  if (!s.g.is_symmetric() || !s.g.is_positive_definite())
    rd.fail("g", "g", "frame metric must be symmetric positive definite");
  if (!s.beta.is_symmetric() || (s.p > 0 && !s.beta.is_positive_definite()))
    rd.fail("beta", "beta", "holonomy metric must be symmetric positive definite");
  try {
    check_space(s);
  } catch (const InvalidSpace &e) {
    rd.fail("E", "E", e.what());
  }

  if (options.validate) {
    HolonomyRealization hol;
    try {
      hol = derive_holonomy(s);
    } catch (const Error &e) {
      throw ValidationError("space '" + s.name + "' failed validation: " + e.what());
    }
    const auto report = validate_symmetric_space(s, hol);
    if (!report.passed()) {
      std::string detail;
      for (const auto &c : report.checks)
        if (!c.pass)
          detail += "; " + c.name + ": " + c.detail;
      throw ValidationError("space '" + s.name + "' failed validation (" + report.failures() + ")" + detail);
    }
  }
  return s;
}

std::string serialize_space(const SpaceSpec &spec) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema_version\": " << kSpaceFileSchemaVersion << ",\n";
  os << "  \"name\": " << json(spec.name).dump() << ",\n";
  os << "  \"n\": " << spec.n << ",\n";
  os << "  \"p\": " << spec.p << ",\n";
  os << "  \"g\": ";
  write_matrix(os, spec.g, "       ");
  os << ",\n  \"beta\": ";
  write_matrix(os, spec.beta, "          ");
  os << ",\n  \"E\": [";
  for (std::size_t i = 0; i < spec.E.size(); ++i) {
    os << (i ? ",\n    " : "\n    ");
    write_matrix(os, spec.E[i], "    ");
  }
  os << (spec.E.empty() ? "]" : "\n  ]") << "\n}\n";
  return os.str();
}

SpaceSpec load(const std::filesystem::path &path, const LoadOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open space file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str(), options);
}

void save(const SpaceSpec &spec, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write space file '" + path.string() + "'");
  out << serialize_space(spec);
  if (!out)
    throw Error("failed writing space file '" + path.string() + "'");
}

} // namespace heatgen
