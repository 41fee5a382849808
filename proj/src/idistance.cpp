#include "promips/idistance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "binary_io.hpp"
#include "promips/kmeans.hpp"

namespace promips {

namespace {

constexpr char kIndexMagic[5] = "PMIP";
constexpr char kSidecarMagic[5] = "PMIV";

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Pruning tests compare distances that went through different rounding
// paths; a relative slack keeps them from dropping boundary points.
double slack(double scale) { return 1e-9 * (1.0 + scale); }

std::vector<std::byte> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file(const std::string& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("write failed for " + path);
}

}  // namespace

void IndexConfig::validate() const {
  if (k_p == 0 || n_key == 0 || k_sp == 0) {
    throw InvalidArgument("index config: k_p, n_key and k_sp must be positive");
  }
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
    throw InvalidArgument("index config: epsilon must be positive");
  }
  if (page_size < 64) throw InvalidArgument("index config: page size must be >= 64 bytes");
  if (m > kMaxCodeBits) throw InvalidArgument("index config: m must be <= 32");
}

std::int64_t key_stride(std::size_t n_key) {
  std::int64_t stride = 1;
  while (stride < static_cast<std::int64_t>(10 * n_key)) stride *= 10;
  return stride;
}

std::int64_t index_key(std::uint32_t partition_id, double dist, double epsilon,
                       std::int64_t stride, std::size_t n_key) {
  const double ring = std::floor(std::max(0.0, dist) / epsilon);
  const auto last = static_cast<double>(n_key - 1);
  const auto offset = static_cast<std::int64_t>(ring >= last ? last : ring);
  return static_cast<std::int64_t>(partition_id) * stride + offset;
}

double compute_epsilon(const std::vector<Partition>& partitions, std::size_t n_key) {
  if (partitions.empty() || n_key == 0) {
    throw InvalidArgument("compute_epsilon: need partitions and n_key > 0");
  }
  double sum = 0.0;
  for (const auto& p : partitions) sum += p.radius;
  const double mean = sum / static_cast<double>(partitions.size());
  if (mean == 0.0) return 1.0;
  return mean / static_cast<double>(n_key);
}

// ---------------------------------------------------------------------------
// Build

IDistanceIndex build_index(const ProjectedDataset& projected, const Dataset& original,
                           const ProjectionMatrix& matrix, const IndexConfig& config) {
  config.validate();
  if (original.empty()) throw InvalidArgument("build_index: empty dataset");
  const Dataset& proj = projected.points;
  if (proj.size() != original.size()) {
    throw InvalidArgument("build_index: projected and original point counts differ");
  }
  if (proj.dim() != matrix.m() || original.dim() != matrix.d()) {
    throw InvalidArgument("build_index: dimensions do not match projection matrix");
  }
  if (projected.matrix_seed != matrix.seed()) {
    throw InvalidArgument("build_index: projected data came from a different matrix");
  }
  if (matrix.m() > kMaxCodeBits) throw InvalidArgument("build_index: m must be <= 32");

  const std::size_t n = proj.size();
  const std::size_t m = proj.dim();
  const std::size_t d = original.dim();

  IDistanceIndex index;
  index.config_ = config;
  index.matrix_ = matrix;
  index.norms_ = original.norms();
  index.groups_ = build_code_groups(projected, index.norms_);
  index.stride_ = key_stride(config.n_key);

  // Stage one: partitions.
  const std::size_t k_p = std::min(config.k_p, n);
  const KMeansResult coarse = kmeans(proj.coords(), m, k_p, mix_seed(config.seed, 1));
  std::vector<double> ref_dist(n);
  index.partitions_.resize(k_p);
  for (std::size_t c = 0; c < k_p; ++c) {
    auto& part = index.partitions_[c];
    part.id = static_cast<std::uint32_t>(c);
    const VectorView ref = coarse.centroid(c);
    part.reference.assign(ref.begin(), ref.end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = index.partitions_[coarse.assignment[i]];
    ref_dist[i] = l2_distance(proj.point(static_cast<PointId>(i)), part.reference);
    part.radius = std::max(part.radius, ref_dist[i]);
    ++part.size;
  }
  index.epsilon_ = config.epsilon ? *config.epsilon
                                  : compute_epsilon(index.partitions_, config.n_key);

  std::map<std::int64_t, std::vector<PointId>> by_key;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t key = index_key(coarse.assignment[i], ref_dist[i], index.epsilon_,
                                       index.stride_, config.n_key);
    by_key[key].push_back(static_cast<PointId>(i));
  }

  // Stage two: sub-partitions per key, laid out on pages in key order.
  const std::size_t point_record = 4 + 8 * m + 8;
  index.points_ = PageStore(IDistanceIndex::kPointStore, config.page_size, point_record);
  index.vectors_ = PageStore(IDistanceIndex::kVectorStore, config.page_size, 8 * d);

  std::vector<std::byte> record;
  std::vector<double> gathered;
  for (const auto& [key, ids] : by_key) {
    gathered.clear();
    for (PointId id : ids) {
      const VectorView p = proj.point(id);
      gathered.insert(gathered.end(), p.begin(), p.end());
    }
    const std::size_t k_sp = std::min(config.k_sp, ids.size());
    const KMeansResult fine =
        kmeans(gathered, m, k_sp, mix_seed(config.seed, 2 + static_cast<std::uint64_t>(key)));

    std::vector<std::vector<PointId>> members(k_sp);
    for (std::size_t j = 0; j < ids.size(); ++j) members[fine.assignment[j]].push_back(ids[j]);

    KeyEntry entry{static_cast<std::uint32_t>(index.subs_.size()), 0};
    for (std::size_t c = 0; c < k_sp; ++c) {
      if (members[c].empty()) continue;
      SubPartition sub;
      sub.key = key;
      sub.partition = static_cast<std::uint32_t>(key / index.stride_);
      const VectorView pivot = fine.centroid(c);
      sub.pivot.assign(pivot.begin(), pivot.end());
      sub.first_slot = index.points_.record_count();
      sub.count = members[c].size();
      for (PointId id : members[c]) {
        const VectorView p = proj.point(id);
        sub.radius = std::max(sub.radius, l2_distance(p, sub.pivot));

        record.clear();
        detail::ByteWriter vec_writer(record);
        vec_writer.f64s(original.point(id));
        const std::uint64_t vslot = index.vectors_.append(record);
        // Sidecar page 0 holds its header, so vector pages start one page in.
        const std::uint64_t file_offset = config.page_size + index.vectors_.offset_of(vslot);

        record.clear();
        detail::ByteWriter writer(record);
        writer.u32(id);
        writer.f64s(p);
        writer.u64(file_offset);
        index.points_.append(record);
      }
      index.subs_.push_back(std::move(sub));
      ++entry.sub_count;
    }
    index.keys_.emplace(key, entry);
  }

  index.rebuild_slot_map();
  return index;
}

IDistanceIndex build_index(const Dataset& original, const IndexConfig& config) {
  config.validate();
  if (original.empty()) throw InvalidArgument("build_index: empty dataset");
  const std::size_t m = config.m != 0 ? config.m : optimized_dimension(original.size());
  const ProjectionMatrix matrix(original.dim(), m, config.seed);
  return build_index(project_dataset(matrix, original), original, matrix, config);
}

// ---------------------------------------------------------------------------
// Queries

IDistanceIndex::DecodedRecord IDistanceIndex::decode_point(
    std::span<const std::byte> raw) const {
  detail::ByteReader reader(raw);
  DecodedRecord rec;
  rec.id = reader.u32();
  rec.coords = reader.f64s(m());
  rec.vector_offset = reader.u64();
  return rec;
}

void IDistanceIndex::rebuild_slot_map() {
  slot_of_id_.assign(size(), std::numeric_limits<std::uint64_t>::max());
  for (std::uint64_t slot = 0; slot < points_.record_count(); ++slot) {
    detail::ByteReader reader(points_.peek(slot));
    const PointId id = reader.u32();
    if (id >= slot_of_id_.size() ||
        slot_of_id_[id] != std::numeric_limits<std::uint64_t>::max()) {
      throw FormatError("point store holds an invalid or duplicate id " + std::to_string(id));
    }
    slot_of_id_[id] = slot;
  }
  for (std::size_t id = 0; id < slot_of_id_.size(); ++id) {
    if (slot_of_id_[id] == std::numeric_limits<std::uint64_t>::max()) {
      throw FormatError("point store is missing id " + std::to_string(id));
    }
  }
}

std::vector<RangeHit> IDistanceIndex::range_search(VectorView pq, double r,
                                                   PageTally& tally) const {
  if (pq.size() != m()) throw InvalidArgument("range_search: query has wrong dimension");
  if (!(r >= 0.0)) throw InvalidArgument("range_search: radius must be >= 0");

  std::vector<RangeHit> hits;
  for (const auto& part : partitions_) {
    if (part.size == 0) continue;
    const double dq = l2_distance(pq, part.reference);
    const double tol = slack(dq + part.radius);
    if (dq - r > part.radius + tol) continue;

    const std::int64_t lo_key =
        index_key(part.id, std::max(0.0, dq - r - tol), epsilon_, stride_, config_.n_key);
    const std::int64_t hi_key = index_key(part.id, dq + r + tol, epsilon_, stride_, config_.n_key);
    for (auto it = keys_.lower_bound(lo_key); it != keys_.end() && it->first <= hi_key; ++it) {
      const KeyEntry& entry = it->second;
      for (std::uint32_t s = entry.first_sub; s < entry.first_sub + entry.sub_count; ++s) {
        const SubPartition& sub = subs_[s];
        const double dp = l2_distance(pq, sub.pivot);
        if (dp > sub.radius + r + slack(dp + sub.radius)) continue;
        for (std::uint64_t slot = sub.first_slot; slot < sub.first_slot + sub.count; ++slot) {
          DecodedRecord rec = decode_point(points_.read(slot, tally));
          const double dist = l2_distance(pq, rec.coords);
          if (dist <= r) hits.push_back({rec.id, dist, rec.vector_offset});
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RangeHit& a, const RangeHit& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
  });
  return hits;
}

Vector IDistanceIndex::fetch_projected(PointId id, PageTally& tally) const {
  if (id >= size()) throw InvalidArgument("fetch_projected: id out of range");
  return decode_point(points_.read(slot_of_id_[id], tally)).coords;
}

Vector IDistanceIndex::fetch_original(std::uint64_t vector_offset, PageTally& tally) const {
  if (vector_offset < config_.page_size) {
    throw InvalidArgument("fetch_original: offset points into the sidecar header");
  }
  const std::uint64_t slot = vectors_.slot_at_offset(vector_offset - config_.page_size);
  detail::ByteReader reader(vectors_.read(slot, tally));
  return reader.f64s(d());
}

RangeHit IDistanceIndex::record_of(PointId id) const {
  if (id >= size()) throw InvalidArgument("record_of: id out of range");
  const DecodedRecord rec = decode_point(points_.peek(slot_of_id_[id]));
  return {rec.id, 0.0, rec.vector_offset};
}

Vector IDistanceIndex::projected_point(PointId id) const {
  if (id >= size()) throw InvalidArgument("projected_point: id out of range");
  return decode_point(points_.peek(slot_of_id_[id])).coords;
}

Vector IDistanceIndex::original_point(PointId id) const {
  const std::uint64_t offset = record_of(id).vector_offset;
  detail::ByteReader reader(vectors_.peek(vectors_.slot_at_offset(offset - config_.page_size)));
  return reader.f64s(d());
}

Dataset IDistanceIndex::original_dataset() const {
  std::vector<double> coords;
  coords.reserve(size() * d());
  for (std::size_t id = 0; id < size(); ++id) {
    const Vector p = original_point(static_cast<PointId>(id));
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return Dataset(d(), std::move(coords));
}

IncrementalNN::IncrementalNN(const IDistanceIndex& index, Vector pq, PageTally& tally)
    : index_(index), pq_(std::move(pq)), tally_(tally), seen_(index.size(), false) {
  if (pq_.size() != index.m()) throw InvalidArgument("incremental_nn: query has wrong dimension");
}

std::optional<RangeHit> IncrementalNN::next() {
  while (ready_.empty()) {
    if (found_ == index_.size()) return std::nullopt;
    if (std::isinf(radius_)) {
      throw ContractViolation("incremental_nn: unbounded search missed points");
    }
    radius_ = rounds_ == 0 ? index_.epsilon() : 2.0 * radius_;
    ++rounds_;
    // Range search is exact, so everything within the new radius is final
    // and can be emitted in distance order.
    for (const RangeHit& hit : index_.range_search(pq_, radius_, tally_)) {
      if (seen_[hit.id]) continue;
      seen_[hit.id] = true;
      ready_.push_back(hit);
      ++found_;
    }
    std::reverse(ready_.begin(), ready_.end());
  }
  RangeHit hit = ready_.back();
  ready_.pop_back();
  return hit;
}

// ---------------------------------------------------------------------------
// Persistence

std::string sidecar_path(const std::string& index_path) { return index_path + ".vec"; }

void save_index(const IDistanceIndex& index, const std::string& path) {
  const IndexConfig& cfg = index.config();
  std::vector<std::byte> out;
  detail::ByteWriter w(out);

  w.tag(kIndexMagic);
  w.u16(IDistanceIndex::kFormatVersion);
  w.u32(static_cast<std::uint32_t>(index.d()));
  w.u32(static_cast<std::uint32_t>(index.m()));
  w.u64(index.size());
  w.u32(static_cast<std::uint32_t>(cfg.k_p));
  w.u32(static_cast<std::uint32_t>(cfg.n_key));
  w.u32(static_cast<std::uint32_t>(cfg.k_sp));
  w.f64(index.epsilon());
  w.u64(static_cast<std::uint64_t>(index.stride()));
  w.u32(static_cast<std::uint32_t>(cfg.page_size));
  w.u64(cfg.seed);
  w.u8(cfg.epsilon ? 1 : 0);

  w.f64s(index.matrix().entries());

  const NormTable& norms = index.norms();
  for (std::size_t i = 0; i < norms.size(); ++i) {
    w.f64(norms.sq_l2[i]);
    w.f64(norms.l1[i]);
  }
  w.f64(norms.max_sq_l2);
  w.u32(norms.max_sq_l2_id);

  const CodeGroups& groups = index.code_groups();
  w.u32(static_cast<std::uint32_t>(groups.groups.size()));
  for (const auto& g : groups.groups) {
    w.u32(g.code);
    w.u32(static_cast<std::uint32_t>(g.members.size()));
    for (const auto& member : g.members) {
      w.u32(member.id);
      w.f64(member.l1);
    }
  }

  w.u32(static_cast<std::uint32_t>(index.partitions().size()));
  for (const auto& part : index.partitions()) {
    w.u32(part.id);
    w.f64s(part.reference);
    w.f64(part.radius);
    w.u64(part.size);
  }

  w.u32(static_cast<std::uint32_t>(index.sub_partitions().size()));
  for (const auto& sub : index.sub_partitions()) {
    w.i64(sub.key);
    w.u32(sub.partition);
    w.f64s(sub.pivot);
    w.f64(sub.radius);
    w.u64(sub.first_slot);
    w.u64(sub.count);
  }

  w.u32(static_cast<std::uint32_t>(index.key_map().size()));
  for (const auto& [key, entry] : index.key_map()) {
    w.i64(key);
    w.u32(entry.first_sub);
    w.u32(entry.sub_count);
  }

  const PageStore& points = index.point_store();
  w.u32(static_cast<std::uint32_t>(points.record_size()));
  w.u64(points.record_count());
  w.u64(points.page_count());
  w.bytes(points.raw_pages());
  write_file(path, out);

  const PageStore& vectors = index.vector_store();
  std::vector<std::byte> side;
  detail::ByteWriter sw(side);
  sw.tag(kSidecarMagic);
  sw.u16(IDistanceIndex::kFormatVersion);
  sw.u32(static_cast<std::uint32_t>(index.d()));
  sw.u64(vectors.record_count());
  sw.u32(static_cast<std::uint32_t>(cfg.page_size));
  side.resize(cfg.page_size, std::byte{0});
  sw.bytes(vectors.raw_pages());
  write_file(sidecar_path(path), side);
}

IDistanceIndex load_index(const std::string& path) {
  const std::vector<std::byte> bytes = read_file(path);
  detail::ByteReader r(bytes);
  if (bytes.size() < 4 || !r.tag(kIndexMagic)) throw FormatError(path + ": bad magic bytes");
  const std::uint16_t version = r.u16();
  if (version != IDistanceIndex::kFormatVersion) {
    throw FormatError(path + ": unsupported format version " + std::to_string(version));
  }

  IDistanceIndex index;
  IndexConfig cfg;
  const std::size_t d = r.u32();
  const std::size_t m = r.u32();
  const std::uint64_t n = r.u64();
  cfg.k_p = r.u32();
  cfg.n_key = r.u32();
  cfg.k_sp = r.u32();
  const double epsilon = r.f64();
  const auto stride = static_cast<std::int64_t>(r.u64());
  cfg.page_size = r.u32();
  cfg.seed = r.u64();
  const bool fixed_epsilon = r.u8() != 0;
  cfg.m = m;
  if (fixed_epsilon) cfg.epsilon = epsilon;
  if (d == 0 || m == 0 || m > kMaxCodeBits || n == 0 || !(epsilon > 0.0) ||
      stride <= static_cast<std::int64_t>(cfg.n_key)) {
    throw FormatError(path + ": inconsistent header");
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(path + ": " + e.what());
  }
  index.config_ = cfg;
  index.epsilon_ = epsilon;
  index.stride_ = stride;
  if (r.remaining() < m * d * 8) throw FormatError(path + ": truncated projection matrix");
  index.matrix_ = ProjectionMatrix::from_entries(d, m, cfg.seed, r.f64s(m * d));

  if (r.remaining() / 16 < n) throw FormatError(path + ": truncated norm table");
  NormTable& norms = index.norms_;
  norms.sq_l2.resize(n);
  norms.l1.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    norms.sq_l2[i] = r.f64();
    norms.l1[i] = r.f64();
  }
  norms.max_sq_l2 = r.f64();
  norms.max_sq_l2_id = r.u32();

  CodeGroups& groups = index.groups_;
  groups.m = m;
  const std::uint32_t group_count = r.u32();
  for (std::uint32_t g = 0; g < group_count; ++g) {
    CodeGroup group;
    group.code = r.u32();
    const std::uint32_t members = r.u32();
    if (members == 0 || r.remaining() / 12 < members) {
      throw FormatError(path + ": bad code group");
    }
    group.members.resize(members);
    for (auto& member : group.members) {
      member.id = r.u32();
      member.l1 = r.f64();
    }
    groups.groups.push_back(std::move(group));
  }
  if (groups.point_count() != n) throw FormatError(path + ": code groups do not cover all points");

  const std::uint32_t part_count = r.u32();
  for (std::uint32_t i = 0; i < part_count; ++i) {
    Partition part;
    part.id = r.u32();
    part.reference = r.f64s(m);
    part.radius = r.f64();
    part.size = r.u64();
    index.partitions_.push_back(std::move(part));
  }

  const std::uint32_t sub_count = r.u32();
  for (std::uint32_t i = 0; i < sub_count; ++i) {
    SubPartition sub;
    sub.key = r.i64();
    sub.partition = r.u32();
    sub.pivot = r.f64s(m);
    sub.radius = r.f64();
    sub.first_slot = r.u64();
    sub.count = r.u64();
    index.subs_.push_back(std::move(sub));
  }

  const std::uint32_t key_count = r.u32();
  for (std::uint32_t i = 0; i < key_count; ++i) {
    const std::int64_t key = r.i64();
    KeyEntry entry;
    entry.first_sub = r.u32();
    entry.sub_count = r.u32();
    if (static_cast<std::uint64_t>(entry.first_sub) + entry.sub_count > sub_count) {
      throw FormatError(path + ": key table references missing sub-partitions");
    }
    index.keys_.emplace(key, entry);
  }

  const std::uint32_t record_size = r.u32();
  const std::uint64_t record_count = r.u64();
  const std::uint64_t page_count = r.u64();
  if (record_size != 4 + 8 * m + 8 || record_count != n ||
      page_count > r.remaining() / cfg.page_size) {
    throw FormatError(path + ": bad page payload header");
  }
  auto payload = r.bytes(page_count * cfg.page_size);
  if (r.remaining() != 0) throw FormatError(path + ": trailing bytes after page payload");
  for (const auto& sub : index.subs_) {
    if (sub.first_slot + sub.count > record_count) {
      throw FormatError(path + ": sub-partition beyond page payload");
    }
  }
  index.points_ = PageStore::from_pages(IDistanceIndex::kPointStore, cfg.page_size, record_size,
                                        record_count,
                                        std::vector<std::byte>(payload.begin(), payload.end()));

  const std::string side_path = sidecar_path(path);
  const std::vector<std::byte> side = read_file(side_path);
  detail::ByteReader sr(side);
  if (side.size() < 4 || !sr.tag(kSidecarMagic)) throw FormatError(side_path + ": bad magic bytes");
  if (sr.u16() != IDistanceIndex::kFormatVersion) {
    throw FormatError(side_path + ": unsupported format version");
  }
  const std::uint32_t side_d = sr.u32();
  const std::uint64_t side_records = sr.u64();
  const std::uint32_t side_page = sr.u32();
  if (side_d != d || side_records != n || side_page != cfg.page_size ||
      side.size() < cfg.page_size || (side.size() - cfg.page_size) % cfg.page_size != 0) {
    throw FormatError(side_path + ": sidecar does not match index header");
  }
  index.vectors_ = PageStore::from_pages(
      IDistanceIndex::kVectorStore, cfg.page_size, 8 * d, side_records,
      std::vector<std::byte>(side.begin() + static_cast<std::ptrdiff_t>(cfg.page_size), side.end()));

  index.rebuild_slot_map();
  return index;
}

}  // namespace promips
