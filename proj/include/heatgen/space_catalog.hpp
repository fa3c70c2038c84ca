#pragma once

#include "heatgen/curvature_algebra.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace heatgen {

inline constexpr int kSpaceFileSchemaVersion = 1;

/// Unit round sphere S^n: one generator per index pair c < d (lexicographic)
/// with E^(cd)_ab = delta^c_a delta^d_b - delta^d_a delta^c_b.
SpaceSpec sphere(std::size_t n);

/// Euclidean R^n: no holonomy.
SpaceSpec flat(std::size_t n);

/// Riemannian product; data are block-direct sums of the factors.
SpaceSpec direct_product(const SpaceSpec &first, const SpaceSpec &second);

/// Builtins: S2..S6, S2xS2, S2xS3 and flatN / flat(N) for N >= 1.
/// Throws UnknownSpace.
SpaceSpec builtin(const std::string &name);

/// Names listed by the catalog (flat spaces represented by flat1..flat4).
std::vector<std::string> builtin_names();

/// Splits a datum into de Rham factors by tangent-index connectivity. Returns
/// a single element when the datum does not decompose.
std::vector<SpaceSpec> split_product(const SpaceSpec &spec);

struct LoadOptions {
  bool validate = true;
};

/// JSON document -> SpaceSpec. Throws ParseError (with line and field) or,
/// when validating, ValidationError naming the failed checks.
SpaceSpec parse_space(const std::string &text, const LoadOptions &options = {});
std::string serialize_space(const SpaceSpec &spec);

SpaceSpec load(const std::filesystem::path &path, const LoadOptions &options = {});
void save(const SpaceSpec &spec, const std::filesystem::path &path);

} // namespace heatgen
