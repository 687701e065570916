#pragma once

// Line-oriented system files.
//
//   # comment
//   name golden
//   dimension 1
//   map
//     ratio 0.61803398874989485
//     translation 1
//   end
//   map
//     ratio 0.61803398874989485
//     translation -1
//   end
//   weights 1/2 1/2
//
// Inside a map block: ratio, translation, and for d = 2 either `angle` (radians)
// or `angle_pi` (a rational multiple of pi); otherwise `rotation` followed by d
// rows. Top level also accepts `pv_hint c0 c1 ...` (repeatable, ascending
// integer coefficients) and `subspace` followed by `rows k` and k basis rows.
// Numbers may be written as p/q.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/algebra.hpp"
#include "selfsim/ifs.hpp"

namespace selfsim::config {

struct SystemConfig {
  std::string name;
  int dimension = 0;
  std::vector<ifs::Similarity> maps;
  ifs::ProbabilityVector weights;
  std::vector<algebra::IntPolynomial> pv_hints;
  /// Orthonormalized basis of a user-supplied invariant subspace, as columns.
  std::optional<ifs::Mat> subspace;

  ifs::IFS system() const { return ifs::IFS(dimension, maps); }
};

/// Throws ParseError carrying the 1-based line number.
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);

/// Writes a file that parse_config reads back to the same doubles.
void write_config(std::ostream& out, const SystemConfig& cfg);

}  // namespace selfsim::config
