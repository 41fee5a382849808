#include "promips/dataset_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace promips {

namespace {

std::uint32_t read_le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_le32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

Dataset ingest_fvecs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  const std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t dim = 0;
  std::size_t record = 0;
  std::vector<double> coords;
  while (pos < raw.size()) {
    if (raw.size() - pos < 4) {
      throw FormatError(path + ": record " + std::to_string(record) + " has a truncated header");
    }
    const auto d = static_cast<std::int32_t>(read_le32(&raw[pos]));
    pos += 4;
    if (d <= 0) {
      throw FormatError(path + ": record " + std::to_string(record) + " declares dimension " +
                        std::to_string(d));
    }
    if (record == 0) dim = static_cast<std::size_t>(d);
    if (static_cast<std::size_t>(d) != dim) {
      throw FormatError(path + ": record " + std::to_string(record) + " has dimension " +
                        std::to_string(d) + ", expected " + std::to_string(dim));
    }
    if (raw.size() - pos < 4 * dim) {
      throw FormatError(path + ": record " + std::to_string(record) + " is truncated");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const float v = std::bit_cast<float>(read_le32(&raw[pos]));
      pos += 4;
      if (!std::isfinite(v)) {
        throw FormatError(path + ": record " + std::to_string(record) + " has a non-finite value");
      }
      coords.push_back(static_cast<double>(v));
    }
    ++record;
  }
  if (record == 0) throw FormatError(path + ": no records");
  return Dataset(dim, std::move(coords));
}

Dataset ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  std::size_t dim = 0;
  std::size_t record = 0;
  std::vector<double> coords;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    row.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      std::string field = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      field = first == std::string::npos ? "" : field.substr(first, last - first + 1);
      if (!field.empty() && field.front() == '+') field.erase(0, 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError(path + ": record " + std::to_string(record) + " has malformed value '" +
                          field + "'");
      }
      if (!std::isfinite(value)) {
        throw FormatError(path + ": record " + std::to_string(record) + " has a non-finite value");
      }
      row.push_back(value);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (record == 0) dim = row.size();
    if (row.size() != dim) {
      throw FormatError(path + ": record " + std::to_string(record) + " has dimension " +
                        std::to_string(row.size()) + ", expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), row.begin(), row.end());
    ++record;
  }
  if (record == 0) throw FormatError(path + ": no records");
  return Dataset(dim, std::move(coords));
}

}  // namespace

DataFormat parse_data_format(const std::string& name) {
  if (name == "fvecs") return DataFormat::fvecs;
  if (name == "csv") return DataFormat::csv;
  throw InvalidArgument("unknown data format '" + name + "' (expected fvecs or csv)");
}

Dataset ingest(const std::string& path, DataFormat format) {
  return format == DataFormat::fvecs ? ingest_fvecs(path) : ingest_csv(path);
}

void export_dataset(const Dataset& dataset, const std::string& path, DataFormat format) {
  if (format == DataFormat::fvecs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      write_le32(out, static_cast<std::uint32_t>(dataset.dim()));
      for (double v : dataset.point(static_cast<PointId>(i))) {
        write_le32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  char buf[64];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const VectorView p = dataset.point(static_cast<PointId>(i));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), p[j]);
      if (j) out.put(',');
      out.write(buf, res.ptr - buf);
    }
    out.put('\n');
  }
}

}  // namespace promips
