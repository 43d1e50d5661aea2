#include <algorithm>
#include <fstream>

#include "binio.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

namespace {
constexpr char kBm25Magic[9] = "MQBM25\0\0";
constexpr char kDenseMagic[9] = "MQDENSE\0";
}  // namespace

void InvertedIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kBm25Magic, 8);
  binio::put_u32(out, kFormatVersion);
  binio::put_f64(out, params_.k1);
  binio::put_f64(out, params_.b);
  binio::put_u32(out, (analyzer_.remove_stopwords ? 1u : 0u) | (analyzer_.stem ? 2u : 0u));
  binio::put_f64(out, avg_doc_length_);
  binio::put_u64(out, doc_ids_.size());
  for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
    binio::put_str(out, doc_ids_[i]);
    binio::put_u32(out, doc_lengths_[i]);
  }
  std::vector<const std::string*> terms;
  terms.reserve(postings_.size());
  for (const auto& [term, _] : postings_) terms.push_back(&term);
  std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
  binio::put_u64(out, terms.size());
  for (const auto* term : terms) {
    const auto& plist = postings_.at(*term);
    binio::put_str(out, *term);
    binio::put_u64(out, plist.size());
    for (const auto& p : plist) {
      binio::put_u32(out, p.doc);
      binio::put_u32(out, p.tf);
    }
  }
  if (!out) throw Error("write failed for " + path.string());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open index " + path.string());
  binio::Reader r(in, path.string());
  r.expect_magic(kBm25Magic);
  const auto version = r.u32();
  if (version != kFormatVersion) {
    throw ParseError(path.string() + ": unsupported BM25 index version " + std::to_string(version));
  }
  InvertedIndex idx;
  idx.params_.k1 = r.f64();
  idx.params_.b = r.f64();
  const auto flags = r.u32();
  idx.analyzer_.remove_stopwords = flags & 1u;
  idx.analyzer_.stem = flags & 2u;
  idx.avg_doc_length_ = r.f64();
  const auto n = r.u64();
  idx.doc_ids_.reserve(n);
  idx.doc_lengths_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    idx.doc_ids_.push_back(r.str());
    idx.doc_lengths_.push_back(r.u32());
  }
  const auto terms = r.u64();
  for (std::uint64_t t = 0; t < terms; ++t) {
    std::string term = r.str();
    const auto count = r.u64();
    std::vector<Posting> plist;
    plist.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) {
      const auto doc = r.u32();
      const auto tf = r.u32();
      if (doc >= n) throw ParseError(path.string() + ": posting out of range");
      plist.push_back({doc, tf});
    }
    idx.postings_.emplace(std::move(term), std::move(plist));
  }
  return idx;
}

void DenseIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kDenseMagic, 8);
  binio::put_u32(out, kFormatVersion);
  binio::put_u64(out, doc_ids_.size());
  binio::put_u64(out, dim_);
  for (const auto& id : doc_ids_) binio::put_str(out, id);
  for (float v : matrix_) binio::put_f32(out, v);
  if (!out) throw Error("write failed for " + path.string());
}

DenseIndex DenseIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open index " + path.string());
  binio::Reader r(in, path.string());
  r.expect_magic(kDenseMagic);
  const auto version = r.u32();
  if (version != kFormatVersion) {
    throw ParseError(path.string() + ": unsupported dense index version " + std::to_string(version));
  }
  const auto n = r.u64();
  const auto dim = r.u64();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) ids.push_back(r.str());
  std::vector<float> m(n * dim);
  for (auto& v : m) v = r.f32();
  return DenseIndex(std::move(ids), dim, std::move(m));
}

}  // namespace mythqa
