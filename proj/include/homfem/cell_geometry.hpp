#pragma once

#include "homfem/tensor.hpp"

namespace homfem {

// Unit-cell material layouts. The cross layouts are two-phase composites with
// the inclusion forming a plus-shaped region; "inset" keeps the arms away from
// the cell boundary, "full" extends them across it.
enum class CellLayout { homogeneous, layered, cross_inset, cross_full };

struct CellConfig {
    CellLayout layout = CellLayout::homogeneous;
    IsotropicPhase matrix;     // phase 0
    IsotropicPhase inclusion;  // phase 1
};

// Region membership for y in the unit cell [0,1)^2. Intervals are half-open
// [a,b) so every query point belongs to exactly one phase.
//   cross_inset: ([1/8,7/8) x [3/8,5/8)) u ([3/8,5/8) x [1/8,7/8))
//   cross_full:  ([0,1) x [3/8,5/8))     u ([3/8,5/8) x [0,1))
//   layered:     y2 in [3/8, 5/8)
bool in_inclusion(CellLayout layout, double y1, double y2);

// Componentwise fractional part, mapping into [0,1).
double wrap_unit(double y);

// Precomputed two-phase coefficient field on the unit cell.
class CellCoefficient {
public:
    explicit CellCoefficient(const CellConfig& config);

    const CellConfig& config() const { return config_; }
    const ElasticTensor4& matrix_tensor() const { return matrix_; }
    const ElasticTensor4& inclusion_tensor() const { return inclusion_; }

    // A(y) for y in [0,1)^2.
    const ElasticTensor4& at(double y1, double y2) const;

    // A(x/eps) for x anywhere, eps > 0.
    const ElasticTensor4& at_scaled(double eps, double x1, double x2) const;

private:
    CellConfig config_;
    ElasticTensor4 matrix_;
    ElasticTensor4 inclusion_;
};

// Convenience wrappers returning the tensor by value.
ElasticTensor4 coefficient_at(const CellConfig& config, double y1, double y2);
ElasticTensor4 epsilon_coefficient_at(const CellConfig& config, double eps,
                                      double x1, double x2);

}  // namespace homfem
