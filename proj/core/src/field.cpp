#include "lanemden/field.hpp"

#include <algorithm>
#include <cmath>

#include "lanemden/error.hpp"

namespace lanemden {

std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::even: return "even";
    case Symmetry::odd: return "odd";
    default: return "none";
  }
}

Symmetry symmetry_from_string(const std::string& s) {
  if (s == "none") return Symmetry::none;
  if (s == "even") return Symmetry::even;
  if (s == "odd") return Symmetry::odd;
  throw ValidationError("unknown symmetry tag '" + s + "'");
}

MeridianField::MeridianField(GridPtr grid, Symmetry symmetry)
    : grid_(std::move(grid)), symmetry_(symmetry) {
  if (!grid_) throw ValidationError("field needs a grid");
  values_.assign(grid_->size(), 0.0);
}

MeridianField::MeridianField(GridPtr grid, std::vector<double> values, Symmetry symmetry)
    : grid_(std::move(grid)), values_(std::move(values)), symmetry_(symmetry) {
  if (!grid_) throw ValidationError("field needs a grid");
  if (values_.size() != grid_->size())
    throw ValidationError("field value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("field contains non-finite values");
  if (symmetry_defect(symmetry_) != 0.0)
    throw ValidationError("field values do not satisfy declared " + to_string(symmetry_) +
                          " symmetry");
}

void MeridianField::project(Symmetry s) {
  symmetry_ = s;
  if (s == Symmetry::none) return;
  const int np = grid_->nphi();
  const double sg = s == Symmetry::even ? 1.0 : -1.0;
  for (int i = 0; i < grid_->nr(); ++i) {
    for (int j = 0; j < np / 2; ++j) {
      double& a = values_[grid_->index(i, j)];
      double& b = values_[grid_->index(i, np - 1 - j)];
      const double m = 0.5 * (a + sg * b);
      a = m;
      b = sg * m;
    }
    if (np % 2 == 1 && s == Symmetry::odd) values_[grid_->index(i, np / 2)] = 0.0;
  }
}

double MeridianField::symmetry_defect(Symmetry s) const {
  if (s == Symmetry::none) return 0.0;
  const double sg = s == Symmetry::even ? 1.0 : -1.0;
  double d = 0.0;
  const int np = grid_->nphi();
  for (int i = 0; i < grid_->nr(); ++i)
    for (int j = 0; j < np; ++j)
      d = std::max(d, std::abs((*this)(i, j) - sg * (*this)(i, np - 1 - j)));
  return d;
}

void MeridianField::zero_dirichlet_rows() {
  for (int j = 0; j < grid_->nphi(); ++j) {
    at(0, j) = 0.0;
    at(grid_->nr() - 1, j) = 0.0;
  }
}

double MeridianField::dirichlet_defect() const {
  double d = 0.0;
  for (int j = 0; j < grid_->nphi(); ++j)
    d = std::max({d, std::abs((*this)(0, j)), std::abs((*this)(grid_->nr() - 1, j))});
  return d;
}

double MeridianField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

static void check_same_grid(const MeridianField& a, const MeridianField& b) {
  if (a.grid_ptr() != b.grid_ptr()) throw ValidationError("fields live on different grids");
}

static Symmetry combine(Symmetry a, Symmetry b) { return a == b ? a : Symmetry::none; }

MeridianField& MeridianField::operator+=(const MeridianField& o) {
  check_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  symmetry_ = combine(symmetry_, o.symmetry_);
  return *this;
}

MeridianField& MeridianField::operator-=(const MeridianField& o) {
  check_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  symmetry_ = combine(symmetry_, o.symmetry_);
  return *this;
}

MeridianField& MeridianField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

MeridianField operator+(MeridianField a, const MeridianField& b) { return a += b; }
MeridianField operator-(MeridianField a, const MeridianField& b) { return a -= b; }
MeridianField operator*(double s, MeridianField a) { return a *= s; }

}  // namespace lanemden
