#include "promips/page_store.hpp"

#include <algorithm>
#include <string>

#include "promips/errors.hpp"

namespace promips {

PageStore::PageStore(std::uint8_t store_id, std::size_t page_size,
                     std::size_t record_size)
    : store_id_(store_id), page_size_(page_size), record_size_(record_size) {
  if (page_size == 0 || record_size == 0) {
    throw InvalidArgument("page store: page and record sizes must be positive");
  }
}

PageStore::PageStore(const PageStore& other)
    : store_id_(other.store_id_),
      page_size_(other.page_size_),
      record_size_(other.record_size_),
      record_count_(other.record_count_),
      data_(other.data_),
      total_fetches_(other.total_fetches()) {}

PageStore& PageStore::operator=(const PageStore& other) {
  if (this != &other) {
    store_id_ = other.store_id_;
    page_size_ = other.page_size_;
    record_size_ = other.record_size_;
    record_count_ = other.record_count_;
    data_ = other.data_;
    total_fetches_.store(other.total_fetches());
  }
  return *this;
}

PageStore::PageStore(PageStore&& other) noexcept
    : store_id_(other.store_id_),
      page_size_(other.page_size_),
      record_size_(other.record_size_),
      record_count_(other.record_count_),
      data_(std::move(other.data_)),
      total_fetches_(other.total_fetches()) {}

PageStore& PageStore::operator=(PageStore&& other) noexcept {
  store_id_ = other.store_id_;
  page_size_ = other.page_size_;
  record_size_ = other.record_size_;
  record_count_ = other.record_count_;
  data_ = std::move(other.data_);
  total_fetches_.store(other.total_fetches());
  return *this;
}

PageStore PageStore::from_pages(std::uint8_t store_id, std::size_t page_size,
                                std::size_t record_size,
                                std::uint64_t record_count,
                                std::vector<std::byte> pages) {
  PageStore store(store_id, page_size, record_size);
  if (pages.size() % page_size != 0) {
    throw FormatError("page payload is not a whole number of pages");
  }
  store.data_ = std::move(pages);
  store.record_count_ = record_count;
  if (record_count > 0 &&
      store.first_page_of(record_count - 1) + store.pages_per_record() >
          store.page_count()) {
    throw FormatError("page payload too short for " +
                      std::to_string(record_count) + " records");
  }
  return store;
}

std::uint64_t PageStore::pages_per_record() const {
  return (record_size_ + page_size_ - 1) / page_size_;
}

std::uint64_t PageStore::first_page_of(std::uint64_t slot) const {
  if (record_size_ <= page_size_) return slot / (page_size_ / record_size_);
  return slot * pages_per_record();
}

std::uint64_t PageStore::offset_of(std::uint64_t slot) const {
  if (record_size_ <= page_size_) {
    const std::uint64_t per_page = page_size_ / record_size_;
    return (slot / per_page) * page_size_ + (slot % per_page) * record_size_;
  }
  return slot * pages_per_record() * page_size_;
}

std::uint64_t PageStore::slot_at_offset(std::uint64_t offset) const {
  std::uint64_t slot = 0;
  if (record_size_ <= page_size_) {
    const std::uint64_t per_page = page_size_ / record_size_;
    const std::uint64_t in_page = offset % page_size_;
    if (in_page % record_size_ != 0 || in_page / record_size_ >= per_page) {
      throw FormatError("offset " + std::to_string(offset) + " is not a record start");
    }
    slot = (offset / page_size_) * per_page + in_page / record_size_;
  } else {
    const std::uint64_t span = pages_per_record() * page_size_;
    if (offset % span != 0) {
      throw FormatError("offset " + std::to_string(offset) + " is not a record start");
    }
    slot = offset / span;
  }
  if (slot >= record_count_) {
    throw FormatError("offset " + std::to_string(offset) + " beyond last record");
  }
  return slot;
}

std::uint64_t PageStore::append(std::span<const std::byte> record) {
  if (record.size() != record_size_) {
    throw InvalidArgument("page store: record has wrong size");
  }
  const std::uint64_t slot = record_count_;
  const std::uint64_t end_page = first_page_of(slot) + pages_per_record();
  if (data_.size() < end_page * page_size_) data_.resize(end_page * page_size_);
  std::copy(record.begin(), record.end(),
            data_.begin() + static_cast<std::ptrdiff_t>(offset_of(slot)));
  ++record_count_;
  return slot;
}

std::span<const std::byte> PageStore::peek(std::uint64_t slot) const {
  if (slot >= record_count_) {
    throw InvalidArgument("page store: slot " + std::to_string(slot) + " out of range");
  }
  return std::span<const std::byte>(data_).subspan(offset_of(slot), record_size_);
}

std::span<const std::byte> PageStore::read(std::uint64_t slot,
                                           PageTally& tally) const {
  auto record = peek(slot);
  const std::uint64_t first = first_page_of(slot);
  const std::uint64_t count = pages_per_record();
  for (std::uint64_t page = first; page < first + count; ++page) {
    if (tally.touch(store_id_, page)) {
      total_fetches_.fetch_add(1, std::memory_order_relaxed);
    }
  }
  return record;
}

}  // namespace promips
