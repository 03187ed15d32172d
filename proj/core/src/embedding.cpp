#include "advq/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>

namespace advq {

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("dense vector component not finite");
  }
}

double DenseVector::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

bool DenseVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

DenseVector DenseVector::normalized() const {
  const double n = norm();
  if (n == 0.0) return *this;
  std::vector<double> out(values_);
  for (auto& v : out) v /= n;
  return DenseVector(std::move(out));
}

double cosine(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) throw std::invalid_argument("embedding has wrong dimension");
  for (double v : vector) {
    if (!std::isfinite(v)) throw std::invalid_argument("embedding component not finite");
  }
  const auto offset = data_.size();
  if (!index_.emplace(std::move(token), offset).second) return false;
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::span<const double> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return {};
  return std::span<const double>(data_).subspan(it->second, dim_);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  // from_chars for double is unreliable on older libstdc++; strtod is fine here.
  std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingLoad load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read embedding file: " + path);
  std::string line;
  std::size_t lines = 0, duplicates = 0, malformed = 0;
  std::optional<EmbeddingTable> table;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lines;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::size_t count = 0, dim = 0;
    if (!table && lines == 1 && fields.size() == 2 && parse_size(fields[0], count) &&
        parse_size(fields[1], dim)) {
      continue;  // "count dim" header
    }
    if (fields.size() < 2) {
      ++malformed;
      continue;
    }
    if (!table) table.emplace(fields.size() - 1);
    if (fields.size() - 1 != table->dim()) {
      ++malformed;
      continue;
    }
    values.clear();
    bool ok = true;
    for (std::size_t k = 1; k < fields.size() && ok; ++k) {
      double v;
      ok = parse_double(fields[k], v);
      values.push_back(v);
    }
    if (!ok) {
      ++malformed;
      continue;
    }
    if (!table->add(std::string(fields[0]), values)) ++duplicates;
  }
  if (!table) throw std::runtime_error("embedding file has no vectors: " + path);
  return {std::move(*table), lines, duplicates, malformed};
}

DenseVector embed_doc(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                      const VocabularyStats* stats, EmbedMode mode) {
  std::vector<double> acc(table.dim(), 0.0);
  double total = 0.0;
  if (mode == EmbedMode::mean) {
    for (const auto& token : tokens) {
      const auto v = table.find(token);
      if (v.empty()) continue;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
      total += 1.0;
    }
  } else {
    if (stats == nullptr) {
      throw std::invalid_argument("tfidf_weighted embedding requires vocabulary stats");
    }
    std::vector<std::pair<std::string_view, double>> tf;  // first-occurrence order
    std::unordered_map<std::string_view, std::size_t> slot;
    for (const auto& token : tokens) {
      auto [it, fresh] = slot.emplace(token, tf.size());
      if (fresh) {
        tf.emplace_back(token, 1.0);
      } else {
        tf[it->second].second += 1.0;
      }
    }
    for (const auto& [token, count] : tf) {
      const auto v = table.find(token);
      if (v.empty()) continue;
      const double w = count * stats->idf(token);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
      total += w;
    }
  }
  if (total > 0.0) {
    for (auto& a : acc) a /= total;
  }
  return DenseVector(std::move(acc));
}

}  // namespace advq
