#pragma once

#include <string>
#include <vector>

#include "advq/ingest.hpp"

namespace advq::testing {

// A night-shift worker's story and its post.
inline const std::string kShiftNarrative =
    "I started a new job at a warehouse last month and they keep putting me on back to back "
    "shifts. Last night I slept maybe four hours before heading in again. My manager wants me to "
    "cover a double on Saturday because two people quit. I already drink a lot of energy drinks "
    "and they barely do anything for me anymore. My commute is almost an hour each way so there "
    "is no time for a nap in between. I really need the extra money, so saying no is not an "
    "option right now.";

inline const std::string kTeaNarrative =
    "Over the last year my tea habit has gotten out of hand. I go through about eight mugs a day "
    "and sometimes more on weekends. When I skip a mug in the morning I get a pounding headache by "
    "noon. My partner jokes that I should carry a thermos everywhere. I never thought of tea as "
    "something you could depend on this much.";

inline const std::string kShiftQuestion = "How do I stay awake through a double shift?";
inline const std::string kTeaQuestion = "Is it possible to get hooked on tea?";

inline Post shift_post() {
  return {"shift", kShiftQuestion, kShiftNarrative + " Help? What has worked for other people?",
          std::nullopt};
}

// 100 documents. Every one contains the words of the shift question and of
// "What has worked for other people"; "double" occurs in exactly one.
inline std::vector<std::vector<std::string>> shift_corpus() {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> d = {"what", "has", "worked", "for", "other", "people", "how", "do",
                                  "i", "stay", "awake", "through", "a", "shift",
                                  "doc" + std::to_string(i)};
    if (i == 0) d.push_back("double");
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace advq::testing

#include <filesystem>
#include <fstream>
#include <random>

namespace advq::testing {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("advq-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace advq::testing
