#include "homfem/cell_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace homfem {

namespace {

inline bool in_band(double y, double lo, double hi) { return y >= lo && y < hi; }

}  // namespace

bool in_inclusion(CellLayout layout, double y1, double y2) {
    constexpr double k18 = 1.0 / 8.0, k38 = 3.0 / 8.0, k58 = 5.0 / 8.0,
                     k78 = 7.0 / 8.0;
    switch (layout) {
        case CellLayout::homogeneous:
            return false;
        case CellLayout::layered:
            return in_band(y2, k38, k58);
        case CellLayout::cross_inset:
            return (in_band(y1, k18, k78) && in_band(y2, k38, k58)) ||
                   (in_band(y1, k38, k58) && in_band(y2, k18, k78));
        case CellLayout::cross_full:
            return in_band(y2, k38, k58) || in_band(y1, k38, k58);
    }
    return false;
}

double wrap_unit(double y) {
    double f = y - std::floor(y);
    return f < 1.0 ? f : 0.0;
}

CellCoefficient::CellCoefficient(const CellConfig& config)
    : config_(config),
      matrix_(isotropic_plane_stress(config.matrix)),
      inclusion_(config.layout == CellLayout::homogeneous
                     ? matrix_
                     : isotropic_plane_stress(config.inclusion)) {}

const ElasticTensor4& CellCoefficient::at(double y1, double y2) const {
    return in_inclusion(config_.layout, y1, y2) ? inclusion_ : matrix_;
}

const ElasticTensor4& CellCoefficient::at_scaled(double eps, double x1,
                                                 double x2) const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    return at(wrap_unit(x1 / eps), wrap_unit(x2 / eps));
}

ElasticTensor4 coefficient_at(const CellConfig& config, double y1, double y2) {
    return CellCoefficient(config).at(y1, y2);
}

ElasticTensor4 epsilon_coefficient_at(const CellConfig& config, double eps,
                                      double x1, double x2) {
    return CellCoefficient(config).at_scaled(eps, x1, x2);
}

}  // namespace homfem
