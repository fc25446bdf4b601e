#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragprobe/common.hpp"
#include "ragprobe/corpus.hpp"
#include "ragprobe/metrics.hpp"

namespace ragprobe {

/// Version tag recorded in every trace; bump whenever the template changes,
/// since cached replies are only valid for the prompt that produced them.
inline constexpr const char* kPromptVersion = "qa-json-v1";

enum class Condition { original, remove, replace, duplicate, zero, joint_remove };

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::original: return "original";
        case Condition::remove: return "remove";
        case Condition::replace: return "replace";
        case Condition::duplicate: return "duplicate";
        case Condition::zero: return "zero";
        case Condition::joint_remove: return "joint_remove";
    }
    return "?";
}

inline Condition condition_from_string(const std::string& s) {
    if (s == "original") return Condition::original;
    if (s == "remove") return Condition::remove;
    if (s == "replace") return Condition::replace;
    if (s == "duplicate") return Condition::duplicate;
    if (s == "zero") return Condition::zero;
    if (s == "joint_remove") return Condition::joint_remove;
    throw DataError("unknown condition label '" + s + "'");
}

/// Parsed model reply. used_chunk_ids preserves reply order, deduplicated;
/// ids the model cited but was not given are kept (they count against
/// grounding) and also listed in unknown_used_ids.
struct ModelResponse {
    std::string answer;
    double confidence = 0.0;  // clamped to [0,1]
    std::vector<std::string> used_chunk_ids;
    std::string brief_reason;
    std::vector<std::string> unknown_used_ids;

    TraceSignature signature() const { return {used_chunk_ids, answer, confidence}; }
};

/// Shallow observable trace of one run.
struct TraceRecord {
    Condition condition = Condition::original;
    std::vector<std::string> provided_evidence_ids;
    ModelResponse response;
    std::string raw_reply;
    std::string model_name;
    std::string prompt_version = kPromptVersion;
};

// ---------------- Prompt ----------------

/// Fixed single-shot QA prompt. With zero_context the context block is the
/// no-documents sentence; otherwise one "[id] Title: ... Content: ..." line
/// per chunk, in provided order. Pure and golden-file stable.
inline std::string build_prompt(const std::string& question,
                                const std::vector<Chunk>& chunks,
                                bool zero_context = false) {
    std::string p;
    p += "You are a QA system. Answer the question using ONLY\n";
    p += "the provided context.\n";
    p += "\n";
    p += "Return a JSON object with exactly these keys:\n";
    p += "  \"answer\": your short answer,\n";
    p += "  \"confidence\": float between 0 and 1,\n";
    p += "  \"used_chunk_ids\": list of chunk IDs you relied on,\n";
    p += "  \"brief_reason\": one sentence explanation.\n";
    p += "\n";
    if (zero_context) {
        p += "Context: (No retrieved documents available. Answer from your own knowledge.)\n";
    } else {
        p += "Context:\n";
        for (const auto& c : chunks)
            p += "[" + c.id + "] Title: " + c.title + " Content: " + c.text + "\n";
    }
    p += "\n";
    p += "Question: " + question + "\n";
    p += "\n";
    p += "Respond with valid JSON only.";
    return p;
}

// ---------------- Reply parsing ----------------

namespace detail {

/// First substring of `text` that parses as a JSON object, scanning brace
/// candidates left to right. Handles prose wrappers and markdown fences
/// without needing to understand them.
inline std::optional<nlohmann::json> first_json_object(const std::string& text) {
    for (size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                if (--depth == 0) {
                    const auto candidate = text.substr(start, i - start + 1);
                    auto parsed = nlohmann::json::parse(candidate, nullptr,
                                                        /*allow_exceptions=*/false);
                    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                    break;  // balanced but invalid; try the next '{'
                }
            }
        }
    }
    return std::nullopt;
}

inline std::string json_to_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace detail

/// Extract the schema fields from a raw completion. Missing confidence is
/// 0.0; out-of-range confidence is clamped; missing used_chunk_ids is empty.
/// Throws ReplyParseError (carrying the raw text) when no JSON object can be
/// found, so callers can record the run as failed instead of crashing.
inline ModelResponse parse_response(const std::string& raw,
                                    const std::set<std::string>& known_ids) {
    const auto obj = detail::first_json_object(raw);
    if (!obj) throw ReplyParseError("no JSON object found in model reply", raw);

    ModelResponse r;
    if (obj->contains("answer")) r.answer = detail::json_to_text((*obj)["answer"]);
    if (obj->contains("confidence")) {
        const auto& c = (*obj)["confidence"];
        if (c.is_number()) {
            r.confidence = clamp01(c.get<double>());
        } else if (c.is_string()) {
            try {
                r.confidence = clamp01(std::stod(c.get<std::string>()));
            } catch (...) {
                r.confidence = 0.0;
            }
        }
    }
    if (obj->contains("used_chunk_ids") && (*obj)["used_chunk_ids"].is_array()) {
        std::set<std::string> seen;
        for (const auto& v : (*obj)["used_chunk_ids"]) {
            const std::string id = detail::json_to_text(v);
            if (seen.insert(id).second) r.used_chunk_ids.push_back(id);
        }
    }
    if (obj->contains("brief_reason"))
        r.brief_reason = detail::json_to_text((*obj)["brief_reason"]);
    for (const auto& id : r.used_chunk_ids)
        if (!known_ids.count(id)) r.unknown_used_ids.push_back(id);
    return r;
}

/// Serialize a response in the reply schema; parse_response round-trips it.
inline std::string serialize_response(const ModelResponse& r) {
    nlohmann::json j;
    j["answer"] = r.answer;
    j["confidence"] = r.confidence;
    j["used_chunk_ids"] = r.used_chunk_ids;
    j["brief_reason"] = r.brief_reason;
    return j.dump();
}

// ---------------- Answerers ----------------

/// Produces the raw completion text for one run. Implementations must be
/// safe to call concurrently for distinct examples.
class Answerer {
public:
    virtual ~Answerer() = default;
    virtual std::string model_name() const = 0;
    virtual std::string complete(const Example& example, const std::vector<Chunk>& provided,
                                 bool zero_context, const std::string& prompt) = 0;
};

/// Deterministic offline answerer. Plain mode answers with the gold answer
/// at confidence 0.9 whenever any provided chunk carries a gold support
/// title, citing every support-titled provided chunk; otherwise "Unknown" at
/// 0.1 with no citations. Strict mode requires every gold title to be
/// present among the provided chunks.
class StubAnswerer : public Answerer {
public:
    explicit StubAnswerer(bool strict = false) : strict_(strict) {}

    std::string model_name() const override { return strict_ ? "stub-strict" : "stub"; }

    std::string complete(const Example& example, const std::vector<Chunk>& provided,
                         bool /*zero_context*/, const std::string& /*prompt*/) override {
        std::set<std::string> provided_titles;
        std::set<std::string> cited;
        ModelResponse r;
        for (const auto& c : provided) {
            provided_titles.insert(c.title);
            if (example.gold_support_titles.count(c.title) && cited.insert(c.id).second)
                r.used_chunk_ids.push_back(c.id);
        }
        const bool answerable =
            strict_ ? std::all_of(example.gold_support_titles.begin(),
                                  example.gold_support_titles.end(),
                                  [&](const std::string& t) { return provided_titles.count(t); })
                    : !r.used_chunk_ids.empty();
        if (answerable) {
            r.answer = example.gold_answer;
            r.confidence = 0.9;
            r.brief_reason = "supporting context present";
        } else {
            r.answer = "Unknown";
            r.confidence = 0.1;
            r.used_chunk_ids.clear();
            r.brief_reason = "no supporting context";
        }
        return serialize_response(r);
    }

private:
    bool strict_;
};

}  // namespace ragprobe
