#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ragprobe/common.hpp"
#include "ragprobe/corpus.hpp"

namespace ragprobe {

/// Lowercased maximal alphanumeric runs, in order.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// Okapi BM25 over a per-example chunk list. The scored field is title + text.
/// idf uses the +0.5 smoothed form floored at 0, so scores never go negative
/// on tiny corpora where a term appears in most chunks. Immutable after build.
class Bm25Index {
public:
    Bm25Index(const std::vector<Chunk>& chunks, Bm25Params params = {})
        : params_(params) {
        if (chunks.empty()) throw DataError("cannot build a BM25 index over zero chunks");
        docs_.reserve(chunks.size());
        double total_len = 0.0;
        for (size_t i = 0; i < chunks.size(); ++i) {
            Doc doc;
            doc.id = chunks[i].id;
            const auto tokens = tokenize(chunks[i].title + " " + chunks[i].text);
            doc.length = tokens.size();
            for (const auto& t : tokens) ++doc.tf[t];
            for (const auto& [term, _] : doc.tf) ++df_[term];
            total_len += static_cast<double>(doc.length);
            id_to_pos_[doc.id] = i;
            docs_.push_back(std::move(doc));
        }
        avg_doc_len_ = total_len / static_cast<double>(docs_.size());
    }

    size_t size() const { return docs_.size(); }
    double average_doc_length() const { return avg_doc_len_; }

    size_t document_frequency(const std::string& term) const {
        auto it = df_.find(term);
        return it == df_.end() ? 0 : it->second;
    }

    bool contains(const std::string& chunk_id) const {
        return id_to_pos_.count(chunk_id) > 0;
    }

    double idf(const std::string& term) const {
        const double n = static_cast<double>(docs_.size());
        const double df = static_cast<double>(document_frequency(term));
        const double raw = std::log((n - df + 0.5) / (df + 0.5));
        return raw > 0.0 ? raw : 0.0;
    }

    /// BM25 score of one chunk against a query token list. Repeated query
    /// tokens each contribute, so the score is non-decreasing in query-term
    /// frequency.
    double score(const std::vector<std::string>& query_tokens,
                 const std::string& chunk_id) const {
        auto it = id_to_pos_.find(chunk_id);
        if (it == id_to_pos_.end())
            throw DataError("BM25 score requested for unknown chunk id '" + chunk_id + "'");
        return score_at(query_tokens, it->second);
    }

    /// Top-k chunk ids by descending score; ties broken by ascending chunk
    /// position so rankings are reproducible. Returns fewer than k when the
    /// index is smaller. top_k(q, k) is always a prefix of top_k(q, k+1).
    std::vector<std::string> top_k(const std::vector<std::string>& query_tokens,
                                   size_t k) const {
        std::vector<size_t> order(docs_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<double> scores(docs_.size());
        for (size_t i = 0; i < docs_.size(); ++i) scores[i] = score_at(query_tokens, i);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        const size_t n = std::min(k, order.size());
        std::vector<std::string> ids;
        ids.reserve(n);
        for (size_t i = 0; i < n; ++i) ids.push_back(docs_[order[i]].id);
        return ids;
    }

private:
    struct Doc {
        std::string id;
        size_t length = 0;
        std::unordered_map<std::string, size_t> tf;
    };

    double score_at(const std::vector<std::string>& query_tokens, size_t pos) const {
        const Doc& doc = docs_[pos];
        const double len_norm =
            1.0 - params_.b + params_.b * static_cast<double>(doc.length) / avg_doc_len_;
        double total = 0.0;
        for (const auto& term : query_tokens) {
            auto it = doc.tf.find(term);
            if (it == doc.tf.end()) continue;
            const double tf = static_cast<double>(it->second);
            total += idf(term) * (tf * (params_.k1 + 1.0)) / (tf + params_.k1 * len_norm);
        }
        return total;
    }

    Bm25Params params_;
    std::vector<Doc> docs_;
    std::unordered_map<std::string, size_t> df_;
    std::unordered_map<std::string, size_t> id_to_pos_;
    double avg_doc_len_ = 0.0;
};

inline Bm25Index build_index(const std::vector<Chunk>& chunks, double k1 = 1.2,
                             double b = 0.75) {
    return Bm25Index(chunks, Bm25Params{k1, b});
}

}  // namespace ragprobe
