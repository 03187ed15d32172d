#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace advq {

struct Post {
  std::string id;
  std::string title;
  std::string body;
  std::optional<std::int64_t> created;

  bool operator==(const Post&) const = default;
};

struct LineIssue {
  std::size_t line_number = 0;  // 1-based
  std::string reason;
};

struct IngestSummary {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<LineIssue> issues;
};

// Streams posts from a line-delimited JSON file. Invalid lines are skipped
// and recorded in summary(); an unreadable file throws std::runtime_error.
class PostReader {
 public:
  explicit PostReader(const std::string& path);

  // Returns the next valid post, or nullopt at end of file.
  std::optional<Post> next();

  const IngestSummary& summary() const { return summary_; }

 private:
  void skip(std::string reason);

  std::ifstream in_;
  IngestSummary summary_;
  std::unordered_set<std::string> seen_ids_;
};

struct LoadedPosts {
  std::vector<Post> posts;
  IngestSummary summary;
};

LoadedPosts load_posts(const std::string& path);

// Parses one record. Returns the reason on failure.
std::optional<Post> parse_post(const std::string& line, std::string* reason = nullptr);
std::string serialize_post(const Post& post);

struct RemovalList {
  std::unordered_set<std::string> ids;
};

// Post ids are non-empty and drawn from [A-Za-z0-9_-].
bool is_valid_post_id(std::string_view id);

// One id per line; blank lines and '#' comments are ignored. An invalid id
// throws std::runtime_error naming the line.
RemovalList load_removal_list(const std::string& path);

struct RemovalResult {
  std::vector<Post> posts;
  std::size_t removed = 0;
  std::vector<std::string> absent_ids;  // sorted
};

RemovalResult apply_removal_list(std::vector<Post> posts, const RemovalList& removals);

// Decodes the named entities Reddit dumps carry (&amp; &lt; &gt; &quot;
// &apos; &nbsp;) and numeric references. Unknown entities pass through.
std::string decode_entities(std::string_view text);

}  // namespace advq
