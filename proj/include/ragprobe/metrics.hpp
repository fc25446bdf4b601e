#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ragprobe/common.hpp"
#include "ragprobe/retrieval.hpp"

namespace ragprobe {

// ---------------- Answer normalization & matching ----------------

inline std::vector<std::string> answer_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    for (auto& t : tokenize(text)) {
        if (t == "a" || t == "an" || t == "the") continue;
        tokens.push_back(std::move(t));
    }
    return tokens;
}

/// Lowercase, punctuation stripped, articles removed, whitespace collapsed.
inline std::string normalize_answer(std::string_view text) {
    return join(answer_tokens(text), " ");
}

/// "yes" / "no" when the normalized answer is in the canonical lexicon,
/// nullopt otherwise.
inline std::optional<std::string> yes_no_canonical(std::string_view text) {
    const std::string norm = normalize_answer(text);
    if (norm == "yes" || norm == "yeah" || norm == "yep" || norm == "true") return "yes";
    if (norm == "no" || norm == "nope" || norm == "false") return "no";
    return std::nullopt;
}

/// Canonical decimal form of a purely numeric string (separators stripped,
/// redundant zeros trimmed), or nullopt if the string is not a number.
inline std::optional<std::string> canonical_number(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) continue;
        s.push_back(c);
    }
    if (s.empty()) return std::nullopt;

    bool negative = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        i = 1;
    }
    std::string int_part, frac_part;
    bool seen_dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            (seen_dot ? frac_part : int_part).push_back(s[i]);
        } else {
            return std::nullopt;
        }
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;

    int_part.erase(0, std::min(int_part.find_first_not_of('0'), int_part.size()));
    if (int_part.empty()) int_part = "0";
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();

    std::string out;
    if (negative && !(int_part == "0" && frac_part.empty())) out += '-';
    out += int_part;
    if (!frac_part.empty()) {
        out += '.';
        out += frac_part;
    }
    return out;
}

/// Token-level F1 over multiset overlap of normalized tokens. 1 when both
/// sides normalize to nothing, 0 when only one does.
inline double token_f1(std::string_view pred, std::string_view gold) {
    const auto p = answer_tokens(pred);
    const auto g = answer_tokens(gold);
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;

    std::map<std::string, size_t> gold_counts;
    for (const auto& t : g) ++gold_counts[t];
    size_t common = 0;
    for (const auto& t : p) {
        auto it = gold_counts.find(t);
        if (it != gold_counts.end() && it->second > 0) {
            ++common;
            --it->second;
        }
    }
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(p.size());
    const double recall = static_cast<double>(common) / static_cast<double>(g.size());
    return 2.0 * precision * recall / (precision + recall);
}

/// Strict correctness: normalized exact match only.
inline bool strict_correct(std::string_view pred, std::string_view gold) {
    return normalize_answer(pred) == normalize_answer(gold);
}

/// Soft correctness: normalized match, yes/no canonicalization, numeric
/// equivalence, or token F1 >= 0.8.
inline bool soft_correct(std::string_view pred, std::string_view gold) {
    if (strict_correct(pred, gold)) return true;
    const auto yp = yes_no_canonical(pred);
    const auto yg = yes_no_canonical(gold);
    if (yp && yg && *yp == *yg) return true;
    const auto np = canonical_number(pred);
    const auto ng = canonical_number(gold);
    if (np && ng && *np == *ng) return true;
    return token_f1(pred, gold) >= 0.8;
}

// ---------------- Per-run metrics ----------------

/// Fraction of used chunk ids whose title is a gold support title. Ids with
/// no entry in id_to_title (hallucinated or not provided in this run) count
/// in the denominator, never the numerator. 0 when nothing was used.
inline double grounding_score(const std::vector<std::string>& used_ids,
                              const std::map<std::string, std::string>& id_to_title,
                              const std::set<std::string>& gold_titles) {
    if (used_ids.empty()) return 0.0;
    size_t supported = 0;
    for (const auto& id : used_ids) {
        auto it = id_to_title.find(id);
        if (it != id_to_title.end() && gold_titles.count(it->second)) ++supported;
    }
    return static_cast<double>(supported) / static_cast<double>(used_ids.size());
}

/// |confidence - 1[correct]| for one run.
inline double confidence_error(double confidence, bool correct) {
    return std::abs(confidence - (correct ? 1.0 : 0.0));
}

// ---------------- Trace divergence ----------------

/// Weights of the three-term divergence proxy (used-evidence Jaccard,
/// answer-change indicator, absolute confidence change). The general
/// weighted form also carries action-edit-distance and verification terms,
/// but single-shot traces expose no data for either, so only the proxy is
/// computed anywhere in the harness.
struct DivergenceWeights {
    double w_evidence = 0.5;
    double w_answer = 0.3;
    double w_confidence = 0.2;

    void validate() const {
        if (w_evidence < 0 || w_answer < 0 || w_confidence < 0)
            throw ConfigError("divergence weights must be non-negative");
        if (std::abs(w_evidence + w_answer + w_confidence - 1.0) > 1e-9)
            throw ConfigError("divergence weights must sum to 1");
    }
};

/// The observable fields divergence is computed from.
struct TraceSignature {
    std::vector<std::string> used_ids;
    std::string answer;
    double confidence = 0.0;
};

/// 1 - |A∩B|/|A∪B| over used-id sets; 0 when both are empty.
inline double evidence_jaccard_divergence(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
    const std::set<std::string> sa(a.begin(), a.end());
    const std::set<std::string> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& x : sa) inter += sb.count(x);
    const size_t uni = sa.size() + sb.size() - inter;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

/// Weighted combination of evidence-set change, answer change (on normalized
/// answers), and confidence change. Symmetric; 0 for identical traces; in
/// [0,1] for any weights on the simplex.
inline double trace_divergence(const TraceSignature& a, const TraceSignature& b,
                               const DivergenceWeights& w = {}) {
    const double d_evidence = evidence_jaccard_divergence(a.used_ids, b.used_ids);
    const double d_answer =
        normalize_answer(a.answer) != normalize_answer(b.answer) ? 1.0 : 0.0;
    const double d_confidence = std::abs(a.confidence - b.confidence);
    return w.w_evidence * d_evidence + w.w_answer * d_answer + w.w_confidence * d_confidence;
}

// ---------------- Metric vectors & deltas ----------------

/// Per-run metric values. `correct` is soft correctness and drives all
/// downstream logic; `exact` is the strict match, recorded for reporting.
struct MetricVector {
    bool correct = false;
    bool exact = false;
    double answer_f1 = 0.0;
    double grounding = 0.0;
    double conf_error = 0.0;
    double trace_div = 0.0;  // 0 by definition for the original run
};

/// Original-minus-intervention deltas; positive means the original run
/// outperformed. trace_div is the perturbed run's divergence, carried
/// alongside as a behavioral signal rather than a delta.
struct DeltaVector {
    double d_correct = 0.0;
    double d_f1 = 0.0;
    double d_grounding = 0.0;
    double d_conf_error = 0.0;
    double trace_div = 0.0;
};

inline DeltaVector utility_delta(const MetricVector& orig, const MetricVector& pert) {
    DeltaVector d;
    d.d_correct = (orig.correct ? 1.0 : 0.0) - (pert.correct ? 1.0 : 0.0);
    d.d_f1 = orig.answer_f1 - pert.answer_f1;
    d.d_grounding = orig.grounding - pert.grounding;
    d.d_conf_error = orig.conf_error - pert.conf_error;
    d.trace_div = pert.trace_div;
    return d;
}

}  // namespace ragprobe
