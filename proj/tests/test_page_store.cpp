#include <doctest.h>

#include <cstring>

#include "promips/errors.hpp"
#include "promips/page_store.hpp"

using namespace promips;

namespace {

std::vector<std::byte> record(std::size_t size, std::uint8_t fill) {
  return std::vector<std::byte>(size, std::byte{fill});
}

}  // namespace

TEST_CASE("small records pack into pages") {
  PageStore s(0, 64, 20);
  for (int i = 0; i < 7; ++i) CHECK(s.append(record(20, std::uint8_t(i))) == std::uint64_t(i));
  CHECK(s.pages_per_record() == 1);
  CHECK(s.page_count() == 3);  // 3 records per page
  CHECK(s.first_page_of(0) == 0);
  CHECK(s.first_page_of(2) == 0);
  CHECK(s.first_page_of(3) == 1);
  CHECK(s.offset_of(4) == 64 + 20);
  CHECK(s.slot_at_offset(64 + 20) == 4);
  CHECK_THROWS_AS(s.slot_at_offset(65), FormatError);

  PageTally tally;
  CHECK(s.read(0, tally)[0] == std::byte{0});
  s.read(1, tally);
  CHECK(tally.count() == 1);
  CHECK(s.read(6, tally)[5] == std::byte{6});
  CHECK(tally.count() == 2);
  CHECK(s.total_fetches() == 2);
  s.peek(4);
  CHECK(tally.count() == 2);
  CHECK_THROWS_AS(s.read(7, tally), InvalidArgument);
  CHECK_THROWS_AS(s.append(record(19, 0)), InvalidArgument);
}

TEST_CASE("wide records span whole pages") {
  PageStore s(1, 64, 150);
  s.append(record(150, 1));
  s.append(record(150, 2));
  CHECK(s.pages_per_record() == 3);
  CHECK(s.page_count() == 6);
  CHECK(s.first_page_of(1) == 3);
  PageTally tally;
  CHECK(s.read(1, tally)[149] == std::byte{2});
  CHECK(tally.count() == 3);
}

TEST_CASE("tally separates stores") {
  PageTally t;
  CHECK(t.touch(0, 5));
  CHECK_FALSE(t.touch(0, 5));
  CHECK(t.touch(1, 5));
  CHECK(t.count() == 2);
  t.clear();
  CHECK(t.count() == 0);
}

TEST_CASE("from_pages round trip") {
  PageStore s(0, 64, 20);
  for (int i = 0; i < 5; ++i) s.append(record(20, std::uint8_t(i + 10)));
  const auto raw = s.raw_pages();
  PageStore back = PageStore::from_pages(0, 64, 20, 5, {raw.begin(), raw.end()});
  for (int i = 0; i < 5; ++i) {
    CHECK(std::memcmp(back.peek(i).data(), s.peek(i).data(), 20) == 0);
  }
  CHECK_THROWS_AS(PageStore::from_pages(0, 64, 20, 5, std::vector<std::byte>(100)), FormatError);
  CHECK_THROWS_AS(PageStore::from_pages(0, 64, 20, 9, {raw.begin(), raw.end()}), FormatError);

  PageStore copy = s;
  CHECK(copy.record_count() == 5);
}
