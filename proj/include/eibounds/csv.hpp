#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "eibounds/data_model.hpp"

namespace eib {

// Dataset file format: UTF-8 CSV, header `id,n,x,t` or
// `id,n,x,t,beta_b,beta_w`, `#`-prefixed comment lines skipped anywhere.
// Numbers use `.` decimals regardless of locale. Export writes shortest
// round-trip representations, so load -> export -> load is bit-identical.

Dataset load_csv(std::istream& in, const std::string& name,
                 const ValidationOptions& opts = {});
Dataset load_csv_file(const std::filesystem::path& path,
                      const ValidationOptions& opts = {});

void write_csv(const Dataset& ds, std::ostream& out);
void write_csv_file(const Dataset& ds, const std::filesystem::path& path);

// Shortest representation that std::from_chars parses back to the same bits.
std::string format_double(double v);

}  // namespace eib
