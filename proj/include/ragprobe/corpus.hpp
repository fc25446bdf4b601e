#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragprobe/common.hpp"

namespace ragprobe {

/// One candidate paragraph as it appears in the dataset file.
struct Candidate {
    std::string title;
    std::vector<std::string> sentences;
};

/// One multi-hop QA instance: question, gold answer, gold supporting-fact
/// titles, and the fixed per-example candidate paragraph set.
struct Example {
    std::string id;
    std::string question;
    std::string gold_answer;
    std::set<std::string> gold_support_titles;
    std::vector<Candidate> candidates;  // source order preserved
};

/// An evidence passage with a stable identifier. chunk_id is "ctx_<i>" where
/// i is the chunk's position in its example's candidate order.
struct Chunk {
    std::string id;
    std::string title;
    std::string text;

    bool operator==(const Chunk&) const = default;
};

namespace detail {

inline std::string record_name(const nlohmann::json& rec, size_t index) {
    if (rec.is_object() && rec.contains("_id") && rec["_id"].is_string())
        return rec["_id"].get<std::string>();
    return "record #" + std::to_string(index);
}

inline const nlohmann::json& require_field(const nlohmann::json& rec, const char* field,
                                           const std::string& rec_name) {
    if (!rec.is_object() || !rec.contains(field))
        throw DataError("record '" + rec_name + "' missing required field '" + field + "'");
    return rec[field];
}

/// Shared loader for the HotpotQA-distractor record layout, which
/// 2WikiMultihopQA also follows (question, answer, supporting_facts, context).
inline std::vector<Example> load_multihop_json(const std::string& path,
                                               const std::string& dataset_label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(dataset_label + ": cannot open '" + path + "'");

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(dataset_label + ": malformed JSON in '" + path + "' at byte " +
                        std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_array())
        throw DataError(dataset_label + ": '" + path + "' is not a JSON array of records");

    std::vector<Example> out;
    out.reserve(doc.size());
    for (size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        const std::string name = record_name(rec, i);

        Example ex;
        ex.id = require_field(rec, "_id", name).get<std::string>();
        ex.question = require_field(rec, "question", name).get<std::string>();
        ex.gold_answer = require_field(rec, "answer", name).get<std::string>();

        const auto& sf = require_field(rec, "supporting_facts", name);
        if (!sf.is_array())
            throw DataError("record '" + name + "': field 'supporting_facts' is not an array");
        for (const auto& fact : sf) {
            if (!fact.is_array() || fact.empty() || !fact[0].is_string())
                throw DataError("record '" + name +
                                "': supporting_facts entry is not a [title, index] pair");
            ex.gold_support_titles.insert(fact[0].get<std::string>());
        }
        if (ex.gold_support_titles.empty()) {
            log_warn(dataset_label + ": record '" + name +
                     "' has no supporting facts, skipping");
            continue;
        }

        const auto& ctx = require_field(rec, "context", name);
        if (!ctx.is_array())
            throw DataError("record '" + name + "': field 'context' is not an array");
        for (const auto& para : ctx) {
            if (!para.is_array() || para.size() < 2 || !para[0].is_string() ||
                !para[1].is_array())
                throw DataError("record '" + name +
                                "': context entry is not a [title, sentences] pair");
            Candidate cand;
            cand.title = para[0].get<std::string>();
            if (cand.title.empty())
                throw DataError("record '" + name + "': context entry has an empty title");
            for (const auto& s : para[1]) {
                if (!s.is_string())
                    throw DataError("record '" + name + "': context sentence is not a string");
                cand.sentences.push_back(s.get<std::string>());
            }
            ex.candidates.push_back(std::move(cand));
        }
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace detail

inline std::vector<Example> load_hotpotqa(const std::string& path) {
    return detail::load_multihop_json(path, "hotpotqa");
}

inline std::vector<Example> load_2wiki(const std::string& path) {
    return detail::load_multihop_json(path, "2wiki");
}

/// Candidate paragraphs -> evidence chunks with stable ids ctx_0, ctx_1, ...
/// Chunk text is the paragraph's sentences, each trimmed, joined by single
/// spaces. Deterministic and order-preserving.
inline std::vector<Chunk> chunk_candidates(const Example& example) {
    std::vector<Chunk> chunks;
    chunks.reserve(example.candidates.size());
    for (size_t i = 0; i < example.candidates.size(); ++i) {
        const auto& cand = example.candidates[i];
        Chunk c;
        c.id = "ctx_" + std::to_string(i);
        c.title = cand.title;
        std::string text;
        for (const auto& sentence : cand.sentences) {
            std::string part = trim(sentence);
            if (part.empty()) continue;
            if (!text.empty()) text += ' ';
            text += part;
        }
        c.text = std::move(text);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace ragprobe
