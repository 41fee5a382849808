#pragma once

// Two-stage partitioned iDistance over the projected space.
//
// Stage one splits the projected points into k_p k-means partitions. A point
// at distance t from its partition's reference point gets the key
//
//     key = floor(i * C + t / epsilon)
//
// so each partition owns the key range [i*C, i*C + N_key). Points past the
// last ring are clamped into it. Stage two splits each key's points into at
// most k_sp k-means sub-partitions whose members sit contiguously in a paged
// store, in key order. Range search walks the ordered key map and only
// fetches pages of sub-partitions whose sphere meets the query sphere.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "promips/core.hpp"
#include "promips/page_store.hpp"
#include "promips/projection.hpp"
#include "promips/quick_probe.hpp"

namespace promips {

struct IndexConfig {
  std::size_t k_p = 5;
  std::size_t n_key = 40;
  std::size_t k_sp = 10;
  std::optional<double> epsilon;  // derived from partition radii when unset
  std::size_t page_size = 4096;
  std::uint64_t seed = 42;
  std::size_t m = 0;  // 0 selects optimized_dimension(n)

  double selectivity() const {
    return 1.0 / static_cast<double>(k_p * n_key * k_sp);
  }
  void validate() const;
};

struct Partition {
  std::uint32_t id = 0;
  Vector reference;
  double radius = 0.0;
  std::uint64_t size = 0;
};

struct SubPartition {
  std::int64_t key = 0;
  std::uint32_t partition = 0;
  Vector pivot;
  double radius = 0.0;
  std::uint64_t first_slot = 0;  // records [first_slot, first_slot + count)
  std::uint64_t count = 0;
};

struct KeyEntry {
  std::uint32_t first_sub = 0;
  std::uint32_t sub_count = 0;
};

struct RangeHit {
  PointId id = 0;
  double dist = 0.0;  // projected distance to the query
  std::uint64_t vector_offset = 0;  // file offset in the original-vector sidecar
};

// Partition key stride: 10 * n_key rounded up to a power of ten.
std::int64_t key_stride(std::size_t n_key);

// floor(i*C + dist/epsilon), clamped into the partition's last ring.
std::int64_t index_key(std::uint32_t partition_id, double dist, double epsilon,
                       std::int64_t stride, std::size_t n_key);

// Mean partition radius over n_key; 1 when every radius is zero.
double compute_epsilon(const std::vector<Partition>& partitions, std::size_t n_key);

class IDistanceIndex {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;
  static constexpr std::uint8_t kPointStore = 0;
  static constexpr std::uint8_t kVectorStore = 1;

  const IndexConfig& config() const { return config_; }
  std::size_t d() const { return matrix_.d(); }
  std::size_t m() const { return matrix_.m(); }
  std::size_t size() const { return norms_.size(); }
  double epsilon() const { return epsilon_; }
  std::int64_t stride() const { return stride_; }

  const ProjectionMatrix& matrix() const { return matrix_; }
  const NormTable& norms() const { return norms_; }
  const CodeGroups& code_groups() const { return groups_; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  const std::vector<SubPartition>& sub_partitions() const { return subs_; }
  const std::map<std::int64_t, KeyEntry>& key_map() const { return keys_; }
  const PageStore& point_store() const { return points_; }
  const PageStore& vector_store() const { return vectors_; }

  // Every point with projected distance <= r, ascending (dist, id).
  std::vector<RangeHit> range_search(VectorView pq, double r, PageTally& tally) const;

  Vector fetch_projected(PointId id, PageTally& tally) const;
  Vector fetch_original(std::uint64_t vector_offset, PageTally& tally) const;

  // Uncounted views used by oracles and tooling.
  RangeHit record_of(PointId id) const;
  Vector projected_point(PointId id) const;
  Vector original_point(PointId id) const;
  Dataset original_dataset() const;

 private:
  friend IDistanceIndex build_index(const ProjectedDataset&, const Dataset&,
                                    const ProjectionMatrix&, const IndexConfig&);
  friend IDistanceIndex load_index(const std::string&);

  struct DecodedRecord {
    PointId id;
    Vector coords;
    std::uint64_t vector_offset;
  };
  DecodedRecord decode_point(std::span<const std::byte> raw) const;
  void rebuild_slot_map();

  IndexConfig config_;
  double epsilon_ = 1.0;
  std::int64_t stride_ = 1000;
  ProjectionMatrix matrix_;
  NormTable norms_;
  CodeGroups groups_;
  std::vector<Partition> partitions_;
  std::vector<SubPartition> subs_;
  std::map<std::int64_t, KeyEntry> keys_;
  PageStore points_;
  PageStore vectors_;
  std::vector<std::uint64_t> slot_of_id_;
};

IDistanceIndex build_index(const ProjectedDataset& projected, const Dataset& original,
                           const ProjectionMatrix& matrix, const IndexConfig& config);

// Generates the projection matrix from config (m = 0 means optimized).
IDistanceIndex build_index(const Dataset& original, const IndexConfig& config);

// Writes `path` and the original-vector sidecar `path + ".vec"`.
void save_index(const IDistanceIndex& index, const std::string& path);
IDistanceIndex load_index(const std::string& path);

std::string sidecar_path(const std::string& index_path);

// Yields every point once, by ascending (projected distance, id). Drives
// range searches of radius epsilon, 2 epsilon, 4 epsilon, ...
class IncrementalNN {
 public:
  IncrementalNN(const IDistanceIndex& index, Vector pq, PageTally& tally);

  std::optional<RangeHit> next();
  double radius() const { return radius_; }
  std::size_t rounds() const { return rounds_; }

 private:
  const IDistanceIndex& index_;
  Vector pq_;
  PageTally& tally_;
  double radius_ = 0.0;
  std::size_t rounds_ = 0;
  std::size_t found_ = 0;
  std::vector<RangeHit> ready_;  // next hit at the back
  std::vector<bool> seen_;
};

}  // namespace promips
