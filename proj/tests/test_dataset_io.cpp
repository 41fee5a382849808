#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "promips/dataset_io.hpp"
#include "test_support.hpp"

using namespace promips;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "promips_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
}

void append_fvec(std::string& buf, const std::vector<float>& v) {
  const std::int32_t d = static_cast<std::int32_t>(v.size());
  buf.append(reinterpret_cast<const char*>(&d), 4);
  buf.append(reinterpret_cast<const char*>(v.data()), v.size() * 4);
}

std::string error_of(const fs::path& path, DataFormat format) {
  try {
    ingest(path.string(), format);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("csv") {
  const auto path = temp_file("a.csv");
  write_text(path, "1,2,3\n4,5,6");
  const Dataset ds = ingest(path.string(), DataFormat::csv);
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 3);
  CHECK(ds.point(1)[2] == 6.0);

  write_text(path, "1,2\n\n3,4\n");
  CHECK(ingest(path.string(), DataFormat::csv).size() == 2);

  write_text(path, "1,2\n3,4,5\n");
  CHECK(error_of(path, DataFormat::csv).find("record 1") != std::string::npos);
  write_text(path, "1,abc\n");
  CHECK_FALSE(error_of(path, DataFormat::csv).empty());
  write_text(path, "1,nan\n");
  CHECK_FALSE(error_of(path, DataFormat::csv).empty());
}

TEST_CASE("fvecs") {
  const auto path = temp_file("a.fvecs");
  std::string buf;
  append_fvec(buf, {1.5f, -2.0f});
  append_fvec(buf, {0.25f, 8.0f});
  write_text(path, buf);
  const Dataset ds = ingest(path.string(), DataFormat::fvecs);
  CHECK(ds.size() == 2);
  CHECK(ds.point(0)[0] == 1.5);
  CHECK(ds.point(1)[1] == 8.0);

  append_fvec(buf, {1.0f, 2.0f, 3.0f});
  write_text(path, buf);
  CHECK(error_of(path, DataFormat::fvecs).find("record 2") != std::string::npos);

  write_text(path, buf.substr(0, 10));
  CHECK_FALSE(error_of(path, DataFormat::fvecs).empty());
  write_text(path, "");
  CHECK_FALSE(error_of(path, DataFormat::fvecs).empty());

  std::string inf_buf;
  append_fvec(inf_buf, {1.0f, std::numeric_limits<float>::infinity()});
  write_text(path, inf_buf);
  CHECK(error_of(path, DataFormat::fvecs).find("non-finite") != std::string::npos);
}

TEST_CASE("export and ingest round trip") {
  std::mt19937_64 rng(1);
  const Dataset ds = testing::random_dataset(rng, 50, 7);
  for (auto format : {DataFormat::fvecs, DataFormat::csv}) {
    const auto path = temp_file(format == DataFormat::csv ? "rt.csv" : "rt.fvecs");
    export_dataset(ds, path.string(), format);
    const Dataset back = ingest(path.string(), format);
    REQUIRE(back.size() == 50);
    for (std::size_t i = 0; i < ds.coords().size(); ++i) {
      const double want =
          format == DataFormat::csv ? ds.coords()[i] : static_cast<double>(static_cast<float>(ds.coords()[i]));
      CHECK(back.coords()[i] == want);
    }
  }
  CHECK(parse_data_format("csv") == DataFormat::csv);
  CHECK(parse_data_format("fvecs") == DataFormat::fvecs);
  CHECK_THROWS_AS(parse_data_format("bvecs"), InvalidArgument);
}
