#include "promips/core.hpp"

#include <cmath>
#include <string>

namespace promips {

namespace {

void require_same_dim(VectorView a, VectorView b, const char* op) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

NormTable compute_norms(std::size_t dim, std::span<const double> coords) {
  NormTable table;
  const std::size_t n = coords.size() / dim;
  table.sq_l2.resize(n);
  table.l1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    VectorView row(coords.data() + i * dim, dim);
    table.sq_l2[i] = squared_l2_norm(row);
    table.l1[i] = l1_norm(row);
    if (i == 0 || table.sq_l2[i] > table.max_sq_l2) {
      table.max_sq_l2 = table.sq_l2[i];
      table.max_sq_l2_id = static_cast<PointId>(i);
    }
  }
  return table;
}

}  // namespace

double inner_product(VectorView a, VectorView b) {
  require_same_dim(a, b, "inner_product");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double squared_l2_distance(VectorView a, VectorView b) {
  require_same_dim(a, b, "l2_distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double l2_distance(VectorView a, VectorView b) {
  return std::sqrt(squared_l2_distance(a, b));
}

double squared_l2_norm(VectorView v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return sum;
}

double l1_norm(VectorView v) {
  double sum = 0.0;
  for (double x : v) sum += std::abs(x);
  return sum;
}

void check_vector(VectorView v) {
  if (v.empty()) throw InvalidArgument("vector has dimension 0");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InvalidArgument("non-finite coordinate at index " +
                            std::to_string(i));
    }
  }
}

Dataset::Dataset(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InvalidArgument("dataset dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw InvalidArgument("coordinate count is not a multiple of dimension");
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw InvalidArgument("non-finite coordinate in point " +
                            std::to_string(i / dim_));
    }
  }
  if (!coords_.empty()) norms_ = compute_norms(dim_, coords_);
}

Dataset Dataset::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) throw InvalidArgument("from_rows: no rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InvalidArgument("from_rows: row " + std::to_string(i) +
                            " has dimension " + std::to_string(rows[i].size()) +
                            ", expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return Dataset(dim, std::move(coords));
}

NormTable build_norm_table(const Dataset& dataset) {
  if (dataset.empty()) throw InvalidArgument("build_norm_table: empty dataset");
  return compute_norms(dataset.dim(), dataset.coords());
}

}  // namespace promips
