#include "advq/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace advq {

namespace {

using nlohmann::json;

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

// Reddit replaces the text of deleted posts with these markers.
bool is_deleted_marker(std::string_view s) {
  return s == "[deleted]" || s == "[removed]";
}

std::optional<std::string> text_field(const json& record, const char* key,
                                      std::string* reason) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::string{};
  if (!it->is_string()) {
    if (reason) *reason = std::string("field '") + key + "' is not a string";
    return std::nullopt;
  }
  auto text = decode_entities(it->get<std::string>());
  if (is_deleted_marker(text)) text.clear();
  return text;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += text[i++];
      continue;
    }
    const auto name = text.substr(i + 1, semi - i - 1);
    bool decoded = true;
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (name == "nbsp") {
      append_utf8(out, 0xA0);
    } else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const auto digits = name.substr(hex ? 2 : 1);
      unsigned long cp = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') {
          v = c - '0';
        } else if (hex && c >= 'a' && c <= 'f') {
          v = c - 'a' + 10;
        } else if (hex && c >= 'A' && c <= 'F') {
          v = c - 'A' + 10;
        } else {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
        if (cp > 0x10FFFF) {
          ok = false;
          break;
        }
      }
      if (ok && cp != 0) {
        append_utf8(out, cp);
      } else {
        decoded = false;
      }
    } else {
      decoded = false;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

bool is_valid_post_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c == '-';
  });
}

std::optional<Post> parse_post(const std::string& line, std::string* reason) {
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded() || !record.is_object()) {
    if (reason) *reason = "not a JSON object";
    return std::nullopt;
  }
  Post post;
  auto id = record.find("id");
  if (id == record.end() || !id->is_string() || id->get<std::string>().empty()) {
    if (reason) *reason = "missing id";
    return std::nullopt;
  }
  post.id = id->get<std::string>();
  if (!is_valid_post_id(post.id)) {
    if (reason) *reason = "invalid id '" + post.id + "'";
    return std::nullopt;
  }
  auto title = text_field(record, "title", reason);
  auto body = text_field(record, "body", reason);
  if (!title || !body) return std::nullopt;
  post.title = std::move(*title);
  post.body = std::move(*body);
  if (is_blank(post.title) && is_blank(post.body)) {
    if (reason) *reason = "empty title and body";
    return std::nullopt;
  }
  auto created = record.find("created");
  if (created != record.end() && !created->is_null()) {
    if (created->is_number_integer()) {
      post.created = created->get<std::int64_t>();
    } else if (created->is_number_float() && std::isfinite(created->get<double>())) {
      post.created = static_cast<std::int64_t>(created->get<double>());
    } else {
      if (reason) *reason = "field 'created' is not a number";
      return std::nullopt;
    }
  }
  return post;
}

std::string serialize_post(const Post& post) {
  json record = {{"id", post.id}, {"title", post.title}, {"body", post.body}};
  if (post.created) record["created"] = *post.created;
  return record.dump();
}

PostReader::PostReader(const std::string& path) : in_(path) {
  if (!in_) throw std::runtime_error("cannot read corpus file: " + path);
}

void PostReader::skip(std::string reason) {
  ++summary_.skipped;
  summary_.issues.push_back({summary_.lines, std::move(reason)});
}

std::optional<Post> PostReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++summary_.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      skip("blank line");
      continue;
    }
    std::string reason;
    auto post = parse_post(line, &reason);
    if (!post) {
      skip(std::move(reason));
      continue;
    }
    if (!seen_ids_.insert(post->id).second) {
      skip("duplicate id '" + post->id + "'");
      continue;
    }
    ++summary_.loaded;
    return post;
  }
  if (in_.bad()) throw std::runtime_error("I/O error while reading corpus");
  return std::nullopt;
}

LoadedPosts load_posts(const std::string& path) {
  PostReader reader(path);
  LoadedPosts out;
  while (auto post = reader.next()) out.posts.push_back(std::move(*post));
  out.summary = reader.summary();
  return out;
}

RemovalList load_removal_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read removal list: " + path);
  RemovalList list;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    auto id = line.substr(first, last - first + 1);
    if (!is_valid_post_id(id)) {
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": invalid post id '" + id + "'");
    }
    list.ids.insert(std::move(id));
  }
  return list;
}

RemovalResult apply_removal_list(std::vector<Post> posts, const RemovalList& removals) {
  RemovalResult result;
  std::unordered_set<std::string> matched;
  result.posts.reserve(posts.size());
  for (auto& post : posts) {
    if (removals.ids.contains(post.id)) {
      ++result.removed;
      matched.insert(post.id);
    } else {
      result.posts.push_back(std::move(post));
    }
  }
  for (const auto& id : removals.ids) {
    if (!matched.contains(id)) result.absent_ids.push_back(id);
  }
  std::sort(result.absent_ids.begin(), result.absent_ids.end());
  return result;
}

}  // namespace advq
