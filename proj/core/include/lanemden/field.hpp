#pragma once

#include <span>
#include <string>
#include <vector>

#include "lanemden/grid.hpp"

namespace lanemden {

// Parity under phi -> pi - phi (equivalently x_n -> -x_n).
enum class Symmetry { none, even, odd };

std::string to_string(Symmetry s);
Symmetry symmetry_from_string(const std::string& s);

class MeridianField {
 public:
  MeridianField() = default;
  explicit MeridianField(GridPtr grid, Symmetry symmetry = Symmetry::none);
  // Checks that the values honour the declared symmetry exactly.
  MeridianField(GridPtr grid, std::vector<double> values, Symmetry symmetry);

  template <class F>
  static MeridianField sample(GridPtr grid, F&& f, Symmetry symmetry = Symmetry::none) {
    MeridianField out(grid, Symmetry::none);
    for (int i = 0; i < grid->nr(); ++i)
      for (int j = 0; j < grid->nphi(); ++j) out.at(i, j) = f(grid->r(i), grid->phi(j));
    out.project(symmetry);
    return out;
  }

  const MeridianGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Symmetry symmetry() const { return symmetry_; }
  bool empty() const { return !grid_; }

  double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
  double& at(int i, int j) { return values_[grid_->index(i, j)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Orthogonal projection onto the symmetry class; sets the tag.  For even and
  // odd classes mirrored nodes become exact (anti)copies.
  void project(Symmetry s);
  double symmetry_defect(Symmetry s) const;
  void zero_dirichlet_rows();
  double dirichlet_defect() const;

  double max_abs() const;
  MeridianField& operator+=(const MeridianField& o);
  MeridianField& operator-=(const MeridianField& o);
  MeridianField& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> values_;
  Symmetry symmetry_ = Symmetry::none;
};

MeridianField operator+(MeridianField a, const MeridianField& b);
MeridianField operator-(MeridianField a, const MeridianField& b);
MeridianField operator*(double s, MeridianField a);

}  // namespace lanemden
