#pragma once

#include <string>

#include "promips/core.hpp"

namespace promips {

enum class DataFormat { fvecs, csv };

DataFormat parse_data_format(const std::string& name);

// fvecs: repeated [int32 d][d x float32], little-endian, widened to double.
// csv: one vector per line, comma-separated decimals; blank lines skipped.
// Throws FormatError naming the offending record on inconsistent dimension,
// non-finite values or truncation.
Dataset ingest(const std::string& path, DataFormat format);

// Narrowing to float32 for fvecs; csv uses round-trip precision.
void export_dataset(const Dataset& dataset, const std::string& path, DataFormat format);

}  // namespace promips
