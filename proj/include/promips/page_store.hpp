#pragma once

// Fixed-size-page record storage with per-query page accounting.
//
// Records are fixed width. When a record fits in a page, each page holds
// floor(page_size / record_size) records and no record straddles a page
// boundary. Wider records start on a page boundary and occupy
// ceil(record_size / page_size) whole pages.
//
// There is no buffer cache: a PageTally is the only memory of what a query
// has already fetched, so two runs of the same query report the same count.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

namespace promips {

// Distinct pages touched by one query, across any number of stores.
class PageTally {
 public:
  // True when (store, page) was not fetched before in this query.
  bool touch(std::uint8_t store, std::uint64_t page) {
    return pages_.insert((static_cast<std::uint64_t>(store) << 56) | page).second;
  }
  std::size_t count() const { return pages_.size(); }
  void clear() { pages_.clear(); }

 private:
  std::unordered_set<std::uint64_t> pages_;
};

class PageStore {
 public:
  PageStore() = default;
  PageStore(std::uint8_t store_id, std::size_t page_size, std::size_t record_size);

  PageStore(const PageStore& other);
  PageStore& operator=(const PageStore& other);
  PageStore(PageStore&& other) noexcept;
  PageStore& operator=(PageStore&& other) noexcept;

  // Rebuilds a store from a persisted page payload.
  static PageStore from_pages(std::uint8_t store_id, std::size_t page_size,
                              std::size_t record_size, std::uint64_t record_count,
                              std::vector<std::byte> pages);

  // Appends one record and returns its slot index.
  std::uint64_t append(std::span<const std::byte> record);

  std::uint8_t store_id() const { return store_id_; }
  std::size_t page_size() const { return page_size_; }
  std::size_t record_size() const { return record_size_; }
  std::uint64_t record_count() const { return record_count_; }
  std::uint64_t page_count() const { return data_.size() / page_size_; }
  std::span<const std::byte> raw_pages() const { return data_; }

  // Pages [first, first + count) holding the given slot.
  std::uint64_t first_page_of(std::uint64_t slot) const;
  std::uint64_t pages_per_record() const;

  // Byte offset of a slot within the page payload.
  std::uint64_t offset_of(std::uint64_t slot) const;
  std::uint64_t slot_at_offset(std::uint64_t offset) const;

  // Reads a record, charging its pages to `tally`.
  std::span<const std::byte> read(std::uint64_t slot, PageTally& tally) const;
  // Reads without charging (index loading, verification).
  std::span<const std::byte> peek(std::uint64_t slot) const;

  // Every distinct page fetch ever charged through read().
  std::uint64_t total_fetches() const { return total_fetches_.load(std::memory_order_relaxed); }

 private:
  std::uint8_t store_id_ = 0;
  std::size_t page_size_ = 4096;
  std::size_t record_size_ = 0;
  std::uint64_t record_count_ = 0;
  std::vector<std::byte> data_;
  mutable std::atomic<std::uint64_t> total_fetches_{0};
};

}  // namespace promips
