#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ipa {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

enum class QuestionFormat { multiple_choice, yes_no, open_ended };

const char* to_string(QuestionFormat f);
QuestionFormat question_format_from_string(const std::string& s);

struct Sample {
    std::string id;          // content hash over (image digest, instruction, reference)
    std::string image_ref;   // path relative to the corpus image root
    std::string image_digest;
    std::string instruction;
    std::string reference;
    std::string source;
    QuestionFormat format = QuestionFormat::open_ended;
    bool converted = false;  // true if MCQ options were stripped at ingest

    json to_json() const;
    static Sample from_json(const json& j);
    static std::string compute_id(const std::string& image_digest, const std::string& instruction,
                                  const std::string& reference);
};

struct SourceSpec {
    std::string name;
    std::string path;  // line-delimited record file
};

struct SourceIngestStats {
    std::string name;
    int records_read = 0;
    int samples = 0;
    int skipped_malformed = 0;
    int skipped_missing_image = 0;
    int skipped_undecodable = 0;
    int converted = 0;
};

struct CorpusManifest {
    std::vector<SourceIngestStats> sources;
    int total_samples = 0;
    double conversion_p = 0.0;
    std::uint64_t ingest_seed = 0;

    json to_json() const;
    static CorpusManifest from_json(const json& j);
};

// ---------------------------------------------------------------------------
// Candidates, feedback, verdicts
// ---------------------------------------------------------------------------

enum class ProvenanceKind { normal, contrastive, revised, reference_guided };

const char* to_string(ProvenanceKind k);
ProvenanceKind provenance_kind_from_string(const std::string& s);

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::normal;
    std::string model;                 // generator or reviser name
    int draw_index = 0;                // normal/contrastive draw index
    std::string perturbation;          // serialized PerturbationSpec (contrastive only)
    std::string parent_candidate_id;   // revised only
    std::string feedback_id;           // revised only

    std::string summary() const;       // compact human-readable provenance tag
    json to_json() const;
    static Provenance from_json(const json& j);
};

struct Candidate {
    std::string id;
    std::string sample_id;
    std::string text;
    Provenance provenance;
    int word_count = 0;

    json to_json() const;
    static Candidate from_json(const json& j);
    static Candidate make(const std::string& sample_id, std::string text, Provenance prov);
};

enum class FeedbackMode { plain, reference_guided };

const char* to_string(FeedbackMode m);

struct Feedback {
    std::string id;
    std::string sample_id;
    std::string parent_candidate_id;
    std::string text;
    FeedbackMode mode = FeedbackMode::plain;
    std::string reviser;
    bool well_formed = false;  // all required section headers present

    json to_json() const;
    static Feedback from_json(const json& j);
};

enum class VerdictState { ok, error };

struct Verdict {
    std::string candidate_id;
    VerdictState state = VerdictState::error;
    bool passed = false;
    std::string assessment_text;
    std::string verifier;
    std::vector<std::string> vote_detail;  // per-call outcomes: "pass" | "fail" | "unparseable" | "transport_error"

    json to_json() const;
    static Verdict from_json(const json& j);
};

// ---------------------------------------------------------------------------
// Preference pairs
// ---------------------------------------------------------------------------

enum class PairKind { response, feedback };

const char* to_string(PairKind k);

struct PreferencePair {
    std::string id;
    std::string sample_id;
    PairKind kind = PairKind::response;
    std::string chosen_id;
    std::string rejected_id;
    int round = 1;
    std::string chosen_text;
    std::string rejected_text;
    std::string chosen_provenance;
    std::string rejected_provenance;

    json to_json() const;
    static PreferencePair from_json(const json& j);
};

// ---------------------------------------------------------------------------
// Per-sample record set: everything one sample produced in one round.
// Immutable once the sample reaches a terminal status; written atomically.
// ---------------------------------------------------------------------------

struct StageFailure {
    std::string stage;   // "sample_normal", "sample_contrastive", "feedback", "refine", "verify"
    std::string detail;

    json to_json() const;
    static StageFailure from_json(const json& j);
};

enum class SampleStatus { pending, done_with_pairs, done_empty_win, done_empty_loss, errored };

const char* to_string(SampleStatus s);
SampleStatus sample_status_from_string(const std::string& s);

struct SampleRecordSet {
    std::string sample_id;
    int round = 1;
    std::vector<Candidate> candidates;  // canonical order: normal, contrastive, revised
    std::vector<Feedback> feedbacks;
    std::vector<Verdict> verdicts;      // parallel to candidates by candidate_id lookup
    std::vector<PreferencePair> pairs;  // response + feedback pairs from this sample
    std::vector<StageFailure> failures;
    SampleStatus status = SampleStatus::pending;

    const Verdict* verdict_for(const std::string& candidate_id) const;
    const Candidate* candidate_by_id(const std::string& candidate_id) const;

    json to_json() const;
    static SampleRecordSet from_json(const json& j);
};

}  // namespace ipa
