#pragma once

#include <string>

#include "qfield/grid.hpp"

namespace qfield {

enum class PotentialKind { free, harmonic, barrier, well, tabulated };

/// External potential V(x). Presets are evaluated on any grid; a tabulated
/// potential is only valid on a grid with the same sample count.
template <typename Scalar>
struct PotentialSpec {
  PotentialKind kind = PotentialKind::free;
  Scalar stiffness = 1;  // harmonic: V = stiffness * (x - center)^2
  Scalar height = 1;     // barrier: V = height inside the window
  Scalar depth = 1;      // well: V = -depth inside the window
  Scalar width = 1;      // barrier/well window width
  Scalar center = 0;
  VectorX<Scalar> table;

  static PotentialSpec free() { return {}; }
  static PotentialSpec harmonic(Scalar stiffness, Scalar center = 0) {
    PotentialSpec p;
    p.kind = PotentialKind::harmonic;
    p.stiffness = stiffness;
    p.center = center;
    return p;
  }
  static PotentialSpec barrier(Scalar height, Scalar width, Scalar center = 0) {
    PotentialSpec p;
    p.kind = PotentialKind::barrier;
    p.height = height;
    p.width = width;
    p.center = center;
    return p;
  }
  static PotentialSpec well(Scalar depth, Scalar width, Scalar center = 0) {
    PotentialSpec p;
    p.kind = PotentialKind::well;
    p.depth = depth;
    p.width = width;
    p.center = center;
    return p;
  }
  static PotentialSpec tabulated(VectorX<Scalar> values) {
    PotentialSpec p;
    p.kind = PotentialKind::tabulated;
    p.table = std::move(values);
    return p;
  }

  bool is_free() const { return kind == PotentialKind::free; }
};

template <typename Scalar>
VectorX<Scalar> sample_potential(const PotentialSpec<Scalar>& spec, const GridSpec<Scalar>& grid) {
  VectorX<Scalar> v = VectorX<Scalar>::Zero(grid.n_points);
  auto inside = [&](Scalar x) { return std::abs(x - spec.center) < spec.width / Scalar(2); };
  switch (spec.kind) {
    case PotentialKind::free:
      break;
    case PotentialKind::harmonic:
      for (Index i = 0; i < grid.n_points; ++i) {
        const Scalar d = grid.x(i) - spec.center;
        v[i] = spec.stiffness * d * d;
      }
      break;
    case PotentialKind::barrier:
      for (Index i = 0; i < grid.n_points; ++i) v[i] = inside(grid.x(i)) ? spec.height : Scalar(0);
      break;
    case PotentialKind::well:
      for (Index i = 0; i < grid.n_points; ++i) v[i] = inside(grid.x(i)) ? -spec.depth : Scalar(0);
      break;
    case PotentialKind::tabulated:
      if (spec.table.size() != grid.n_points) {
        throw ValidationError("tabulated potential has " + std::to_string(spec.table.size()) +
                              " samples, grid has " + std::to_string(grid.n_points));
      }
      v = spec.table;
      break;
  }
  if (!v.allFinite()) throw ValidationError("potential samples must be finite");
  return v;
}

}  // namespace qfield
