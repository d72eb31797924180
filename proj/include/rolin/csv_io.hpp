#pragma once

#include <iosfwd>
#include <string>

#include "rolin/dataset.hpp"

namespace rolin {

// Reads a CSV with a header row x1..xp,y1..yq (p, q >= 1) and one decimal
// real per field. Throws DataError (with line number) on malformed input and
// SampleSizeError when there are no data rows.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::istream& in, const std::string& label = "csv");

// Writes the same format with shortest round-trip formatting, so loading the
// output reproduces the dataset exactly.
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::string& path, const Dataset& data);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace rolin
