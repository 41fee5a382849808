#pragma once

// Dense vectors, norm/inner-product primitives and the dataset container.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "promips/errors.hpp"

namespace promips {

using PointId = std::uint32_t;

// Owned coordinates. Everything is widened to 64-bit on ingestion.
using Vector = std::vector<double>;
// Read-only view over a vector stored elsewhere (dataset row, page record).
using VectorView = std::span<const double>;

// Sum of a_i * b_i, accumulated strictly left to right.
double inner_product(VectorView a, VectorView b);

double squared_l2_distance(VectorView a, VectorView b);
double l2_distance(VectorView a, VectorView b);

double squared_l2_norm(VectorView v);
double l1_norm(VectorView v);

// Throws InvalidArgument if v is empty or holds a NaN/Inf.
void check_vector(VectorView v);

struct NormTable {
  std::vector<double> sq_l2;
  std::vector<double> l1;
  double max_sq_l2 = 0.0;
  PointId max_sq_l2_id = 0;

  std::size_t size() const { return sq_l2.size(); }
};

// Row-major, fixed-dimension point collection. Ids are dense [0, n).
class Dataset {
 public:
  Dataset() = default;
  // coords.size() must be a multiple of dim; every coordinate must be finite.
  Dataset(std::size_t dim, std::vector<double> coords);

  static Dataset from_rows(const std::vector<Vector>& rows);

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  VectorView point(PointId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }

  // Empty table when the dataset is empty.
  const NormTable& norms() const { return norms_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  NormTable norms_;
};

// Per-point squared 2-norms and 1-norms plus the maximum squared norm.
// Ties for the maximum resolve to the lowest id.
NormTable build_norm_table(const Dataset& dataset);

}  // namespace promips
