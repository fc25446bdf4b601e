#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ragprobe/answerer.hpp"
#include "ragprobe/common.hpp"
#include "ragprobe/corpus.hpp"
#include "ragprobe/retrieval.hpp"

namespace ragprobe {

enum class Hardness { easy, medium, hard };
enum class DupPosition { front, after_original, end };

inline const char* to_string(Hardness h) {
    switch (h) {
        case Hardness::easy: return "easy";
        case Hardness::medium: return "medium";
        case Hardness::hard: return "hard";
    }
    return "?";
}

inline Hardness hardness_from_string(const std::string& s) {
    if (s == "easy") return Hardness::easy;
    if (s == "medium") return Hardness::medium;
    if (s == "hard") return Hardness::hard;
    throw ConfigError("unknown hardness '" + s + "' (easy|medium|hard)");
}

inline const char* to_string(DupPosition p) {
    switch (p) {
        case DupPosition::front: return "front";
        case DupPosition::after_original: return "after_original";
        case DupPosition::end: return "end";
    }
    return "?";
}

inline DupPosition dup_position_from_string(const std::string& s) {
    if (s == "front") return DupPosition::front;
    if (s == "after_original") return DupPosition::after_original;
    if (s == "end") return DupPosition::end;
    throw ConfigError("unknown duplicate position '" + s + "' (front|after_original|end)");
}

/// One perturbation request. hardness applies to replace only, position to
/// duplicate only, rng_seed to easy replacement only.
struct InterventionSpec {
    Condition kind = Condition::remove;
    std::optional<Hardness> hardness;
    std::optional<DupPosition> position;
    std::uint64_t rng_seed = 0;
};

namespace detail {

inline size_t find_chunk(const std::vector<Chunk>& evidence, const std::string& target_id,
                         const char* op) {
    for (size_t i = 0; i < evidence.size(); ++i)
        if (evidence[i].id == target_id) return i;
    throw DataError(std::string(op) + ": target chunk '" + target_id +
                    "' not present in evidence list");
}

}  // namespace detail

/// Pick the evidence item to perturb, by fixed priority:
///   1. a model-used chunk whose title is a gold support title,
///   2. any model-used chunk,
///   3. the first retrieved chunk whose title is a gold support title,
///   4. the highest-ranked retrieved chunk.
/// Within tiers 1-2 the earliest id in used_chunk_ids order wins. Used ids
/// that do not name a retrieved chunk are skipped. Total: tier 4 always
/// succeeds on a non-empty retrieval.
inline std::string select_target(const TraceRecord& trace, const std::vector<Chunk>& retrieved,
                                 const std::set<std::string>& gold_titles) {
    if (retrieved.empty()) throw DataError("select_target: retrieved evidence is empty");
    std::map<std::string, const Chunk*> by_id;
    for (const auto& c : retrieved) by_id.emplace(c.id, &c);

    const auto& used = trace.response.used_chunk_ids;
    for (const auto& id : used) {
        auto it = by_id.find(id);
        if (it != by_id.end() && gold_titles.count(it->second->title)) return id;
    }
    for (const auto& id : used) {
        if (by_id.count(id)) return id;
    }
    for (const auto& c : retrieved) {
        if (gold_titles.count(c.title)) return c.id;
    }
    return retrieved.front().id;
}

/// Delete the target item; relative order of the rest is preserved.
inline std::vector<Chunk> apply_remove(const std::vector<Chunk>& evidence,
                                       const std::string& target_id) {
    const size_t pos = detail::find_chunk(evidence, target_id, "remove");
    std::vector<Chunk> out = evidence;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    return out;
}

/// Choose a non-supporting substitute from the example pool: title not in
/// gold_titles, not the target, and not among excluded_ids (the ids already
/// provided in the evidence list). Easy draws uniformly under the seed;
/// medium takes the highest BM25 score against the question; hard the
/// highest against the target text. Score ties break toward the lower pool
/// position. Throws when no chunk is eligible.
inline Chunk select_replacement(const std::vector<Chunk>& pool,
                                const std::set<std::string>& gold_titles,
                                const std::vector<std::string>& question_tokens,
                                const Chunk& target, Hardness hardness, std::uint64_t seed,
                                const std::set<std::string>& excluded_ids) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < pool.size(); ++i) {
        const Chunk& c = pool[i];
        if (c.id == target.id) continue;
        if (gold_titles.count(c.title)) continue;
        if (excluded_ids.count(c.id)) continue;
        eligible.push_back(i);
    }
    if (eligible.empty())
        throw DataError("select_replacement: no eligible non-support chunk in pool");
    if (eligible.size() == 1) return pool[eligible.front()];

    if (hardness == Hardness::easy) {
        std::mt19937_64 rng(seed);
        return pool[eligible[bounded_uniform(rng, eligible.size())]];
    }

    const Bm25Index index(pool);
    const std::vector<std::string> query =
        hardness == Hardness::medium ? question_tokens : tokenize(target.text);
    size_t best = eligible.front();
    double best_score = index.score(query, pool[best].id);
    for (size_t k = 1; k < eligible.size(); ++k) {
        const size_t i = eligible[k];
        const double s = index.score(query, pool[i].id);
        if (s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return pool[best];
}

/// Substitute the replacement into the target's slot. The replacement keeps
/// its own chunk id; ids are never rewritten.
inline std::vector<Chunk> apply_replace(const std::vector<Chunk>& evidence,
                                        const std::string& target_id,
                                        const Chunk& replacement) {
    const size_t pos = detail::find_chunk(evidence, target_id, "replace");
    std::vector<Chunk> out = evidence;
    out[pos] = replacement;
    return out;
}

/// Insert a second copy of the target (same chunk id) at the given position.
inline std::vector<Chunk> apply_duplicate(const std::vector<Chunk>& evidence,
                                          const std::string& target_id,
                                          DupPosition position) {
    const size_t pos = detail::find_chunk(evidence, target_id, "duplicate");
    std::vector<Chunk> out = evidence;
    const Chunk copy = evidence[pos];
    switch (position) {
        case DupPosition::front:
            out.insert(out.begin(), copy);
            break;
        case DupPosition::after_original:
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos) + 1, copy);
            break;
        case DupPosition::end:
            out.push_back(copy);
            break;
    }
    return out;
}

/// Retrieved chunks whose title is a gold support title, in retrieval order.
inline std::vector<std::string> identify_support_chunks(
    const std::vector<Chunk>& retrieved, const std::set<std::string>& gold_titles) {
    std::vector<std::string> ids;
    for (const auto& c : retrieved)
        if (gold_titles.count(c.title)) ids.push_back(c.id);
    return ids;
}

/// Remove two support chunks at once; equals apply_remove composed twice.
inline std::vector<Chunk> joint_remove(const std::vector<Chunk>& evidence,
                                       const std::string& support1_id,
                                       const std::string& support2_id) {
    return apply_remove(apply_remove(evidence, support1_id), support2_id);
}

}  // namespace ragprobe
