#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "advq/cloze.hpp"
#include "advq/pairing.hpp"

namespace advq {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// RFC 4180 style: quoted fields may contain commas, quotes ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

// Shortest text that reads back as the same double.
std::string format_double(double value);

// One JSON object per line, no trailing whitespace.
std::string narrative_to_json(const ExtractedNarrative& narrative);
ExtractedNarrative narrative_from_json(std::string_view line);

std::string pair_to_json(const PairCandidate& pair);
PairCandidate pair_from_json(std::string_view line);

std::string instance_to_json(const ClozeInstance& instance);
ClozeInstance instance_from_json(std::string_view line);

// Reads every non-blank line with `parse`. Errors name the file and line.
template <typename T, typename Parse>
std::vector<T> read_jsonl(const std::filesystem::path& path, Parse parse) {
  const auto text = read_file(path);
  std::vector<T> out;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

template <typename T, typename Serialize>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items,
                 Serialize serialize) {
  std::string out;
  for (const auto& item : items) {
    out += serialize(item);
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace advq
