#include "ipa/types.hpp"

#include <stdexcept>

#include "ipa/util.hpp"

namespace ipa {

// ---------------------------------------------------------------------------
// Enum string maps
// ---------------------------------------------------------------------------

const char* to_string(QuestionFormat f) {
    switch (f) {
        case QuestionFormat::multiple_choice: return "multiple_choice";
        case QuestionFormat::yes_no: return "yes_no";
        case QuestionFormat::open_ended: return "open_ended";
    }
    return "open_ended";
}

QuestionFormat question_format_from_string(const std::string& s) {
    if (s == "multiple_choice") return QuestionFormat::multiple_choice;
    if (s == "yes_no") return QuestionFormat::yes_no;
    if (s == "open_ended") return QuestionFormat::open_ended;
    throw std::invalid_argument("unknown question format: " + s);
}

const char* to_string(ProvenanceKind k) {
    switch (k) {
        case ProvenanceKind::normal: return "normal";
        case ProvenanceKind::contrastive: return "contrastive";
        case ProvenanceKind::revised: return "revised";
        case ProvenanceKind::reference_guided: return "reference_guided";
    }
    return "normal";
}

ProvenanceKind provenance_kind_from_string(const std::string& s) {
    if (s == "normal") return ProvenanceKind::normal;
    if (s == "contrastive") return ProvenanceKind::contrastive;
    if (s == "revised") return ProvenanceKind::revised;
    if (s == "reference_guided") return ProvenanceKind::reference_guided;
    throw std::invalid_argument("unknown provenance kind: " + s);
}

const char* to_string(FeedbackMode m) {
    return m == FeedbackMode::plain ? "plain" : "reference_guided";
}

const char* to_string(PairKind k) { return k == PairKind::response ? "response" : "feedback"; }

const char* to_string(SampleStatus s) {
    switch (s) {
        case SampleStatus::pending: return "pending";
        case SampleStatus::done_with_pairs: return "done_with_pairs";
        case SampleStatus::done_empty_win: return "done_empty_win";
        case SampleStatus::done_empty_loss: return "done_empty_loss";
        case SampleStatus::errored: return "errored";
    }
    return "pending";
}

SampleStatus sample_status_from_string(const std::string& s) {
    if (s == "pending") return SampleStatus::pending;
    if (s == "done_with_pairs") return SampleStatus::done_with_pairs;
    if (s == "done_empty_win") return SampleStatus::done_empty_win;
    if (s == "done_empty_loss") return SampleStatus::done_empty_loss;
    if (s == "errored") return SampleStatus::errored;
    throw std::invalid_argument("unknown sample status: " + s);
}

// ---------------------------------------------------------------------------
// Sample
// ---------------------------------------------------------------------------

std::string Sample::compute_id(const std::string& image_digest, const std::string& instruction,
                               const std::string& reference) {
    std::string material;
    material.reserve(image_digest.size() + instruction.size() + reference.size() + 2);
    material.append(image_digest);
    material.push_back('\x1f');
    material.append(instruction);
    material.push_back('\x1f');
    material.append(reference);
    return digest16(material);
}

json Sample::to_json() const {
    return json{{"id", id},
                {"image_ref", image_ref},
                {"image_digest", image_digest},
                {"instruction", instruction},
                {"reference", reference},
                {"source", source},
                {"format", to_string(format)},
                {"converted", converted}};
}

Sample Sample::from_json(const json& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.image_ref = j.at("image_ref").get<std::string>();
    s.image_digest = j.at("image_digest").get<std::string>();
    s.instruction = j.at("instruction").get<std::string>();
    s.reference = j.at("reference").get<std::string>();
    s.source = j.at("source").get<std::string>();
    s.format = question_format_from_string(j.at("format").get<std::string>());
    s.converted = j.at("converted").get<bool>();
    return s;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

json CorpusManifest::to_json() const {
    json srcs = json::array();
    for (const auto& s : sources) {
        srcs.push_back(json{{"name", s.name},
                            {"records_read", s.records_read},
                            {"samples", s.samples},
                            {"skipped_malformed", s.skipped_malformed},
                            {"skipped_missing_image", s.skipped_missing_image},
                            {"skipped_undecodable", s.skipped_undecodable},
                            {"converted", s.converted}});
    }
    return json{{"sources", srcs},
                {"total_samples", total_samples},
                {"conversion_p", conversion_p},
                {"ingest_seed", ingest_seed}};
}

CorpusManifest CorpusManifest::from_json(const json& j) {
    CorpusManifest m;
    for (const auto& js : j.at("sources")) {
        SourceIngestStats s;
        s.name = js.at("name").get<std::string>();
        s.records_read = js.at("records_read").get<int>();
        s.samples = js.at("samples").get<int>();
        s.skipped_malformed = js.at("skipped_malformed").get<int>();
        s.skipped_missing_image = js.at("skipped_missing_image").get<int>();
        s.skipped_undecodable = js.at("skipped_undecodable").get<int>();
        s.converted = js.at("converted").get<int>();
        m.sources.push_back(s);
    }
    m.total_samples = j.at("total_samples").get<int>();
    m.conversion_p = j.at("conversion_p").get<double>();
    m.ingest_seed = j.at("ingest_seed").get<std::uint64_t>();
    return m;
}

// ---------------------------------------------------------------------------
// Provenance / Candidate
// ---------------------------------------------------------------------------

std::string Provenance::summary() const {
    switch (kind) {
        case ProvenanceKind::normal:
            return "normal:" + model + "#" + std::to_string(draw_index);
        case ProvenanceKind::contrastive:
            return "contrastive:" + model + "#" + std::to_string(draw_index) + ":" + perturbation;
        case ProvenanceKind::revised:
            return "revised:" + model + "<" + parent_candidate_id;
        case ProvenanceKind::reference_guided:
            return "reference_guided:" + model;
    }
    return "";
}

json Provenance::to_json() const {
    json j{{"kind", to_string(kind)}, {"model", model}};
    if (kind == ProvenanceKind::normal || kind == ProvenanceKind::contrastive) {
        j["draw_index"] = draw_index;
    }
    if (kind == ProvenanceKind::contrastive) j["perturbation"] = perturbation;
    if (kind == ProvenanceKind::revised) {
        j["parent_candidate_id"] = parent_candidate_id;
        j["feedback_id"] = feedback_id;
    }
    return j;
}

Provenance Provenance::from_json(const json& j) {
    Provenance p;
    p.kind = provenance_kind_from_string(j.at("kind").get<std::string>());
    p.model = j.at("model").get<std::string>();
    p.draw_index = j.value("draw_index", 0);
    p.perturbation = j.value("perturbation", "");
    p.parent_candidate_id = j.value("parent_candidate_id", "");
    p.feedback_id = j.value("feedback_id", "");
    return p;
}

Candidate Candidate::make(const std::string& sample_id, std::string text, Provenance prov) {
    Candidate c;
    c.sample_id = sample_id;
    c.text = std::move(text);
    c.provenance = std::move(prov);
    c.word_count = ipa::word_count(c.text);
    c.id = digest16(sample_id + "\x1f" + c.provenance.summary() + "\x1f" + c.text);
    return c;
}

json Candidate::to_json() const {
    return json{{"id", id},
                {"sample_id", sample_id},
                {"text", text},
                {"provenance", provenance.to_json()},
                {"word_count", word_count}};
}

Candidate Candidate::from_json(const json& j) {
    Candidate c;
    c.id = j.at("id").get<std::string>();
    c.sample_id = j.at("sample_id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    c.provenance = Provenance::from_json(j.at("provenance"));
    c.word_count = j.at("word_count").get<int>();
    return c;
}

// ---------------------------------------------------------------------------
// Feedback / Verdict
// ---------------------------------------------------------------------------

json Feedback::to_json() const {
    return json{{"id", id},
                {"sample_id", sample_id},
                {"parent_candidate_id", parent_candidate_id},
                {"text", text},
                {"mode", to_string(mode)},
                {"reviser", reviser},
                {"well_formed", well_formed}};
}

Feedback Feedback::from_json(const json& j) {
    Feedback f;
    f.id = j.at("id").get<std::string>();
    f.sample_id = j.at("sample_id").get<std::string>();
    f.parent_candidate_id = j.at("parent_candidate_id").get<std::string>();
    f.text = j.at("text").get<std::string>();
    f.mode = j.at("mode").get<std::string>() == "plain" ? FeedbackMode::plain
                                                        : FeedbackMode::reference_guided;
    f.reviser = j.at("reviser").get<std::string>();
    f.well_formed = j.at("well_formed").get<bool>();
    return f;
}

json Verdict::to_json() const {
    return json{{"candidate_id", candidate_id},
                {"state", state == VerdictState::ok ? "ok" : "error"},
                {"passed", passed},
                {"assessment_text", assessment_text},
                {"verifier", verifier},
                {"vote_detail", vote_detail}};
}

Verdict Verdict::from_json(const json& j) {
    Verdict v;
    v.candidate_id = j.at("candidate_id").get<std::string>();
    v.state = j.at("state").get<std::string>() == "ok" ? VerdictState::ok : VerdictState::error;
    v.passed = j.at("passed").get<bool>();
    v.assessment_text = j.at("assessment_text").get<std::string>();
    v.verifier = j.at("verifier").get<std::string>();
    v.vote_detail = j.at("vote_detail").get<std::vector<std::string>>();
    return v;
}

// ---------------------------------------------------------------------------
// PreferencePair
// ---------------------------------------------------------------------------

json PreferencePair::to_json() const {
    return json{{"id", id},
                {"sample_id", sample_id},
                {"kind", to_string(kind)},
                {"chosen_id", chosen_id},
                {"rejected_id", rejected_id},
                {"round", round},
                {"chosen_text", chosen_text},
                {"rejected_text", rejected_text},
                {"chosen_provenance", chosen_provenance},
                {"rejected_provenance", rejected_provenance}};
}

PreferencePair PreferencePair::from_json(const json& j) {
    PreferencePair p;
    p.id = j.at("id").get<std::string>();
    p.sample_id = j.at("sample_id").get<std::string>();
    p.kind = j.at("kind").get<std::string>() == "response" ? PairKind::response : PairKind::feedback;
    p.chosen_id = j.at("chosen_id").get<std::string>();
    p.rejected_id = j.at("rejected_id").get<std::string>();
    p.round = j.at("round").get<int>();
    p.chosen_text = j.at("chosen_text").get<std::string>();
    p.rejected_text = j.at("rejected_text").get<std::string>();
    p.chosen_provenance = j.at("chosen_provenance").get<std::string>();
    p.rejected_provenance = j.at("rejected_provenance").get<std::string>();
    return p;
}

// ---------------------------------------------------------------------------
// StageFailure / SampleRecordSet
// ---------------------------------------------------------------------------

json StageFailure::to_json() const { return json{{"stage", stage}, {"detail", detail}}; }

StageFailure StageFailure::from_json(const json& j) {
    StageFailure f;
    f.stage = j.at("stage").get<std::string>();
    f.detail = j.at("detail").get<std::string>();
    return f;
}

const Verdict* SampleRecordSet::verdict_for(const std::string& candidate_id) const {
    for (const auto& v : verdicts) {
        if (v.candidate_id == candidate_id) return &v;
    }
    return nullptr;
}

const Candidate* SampleRecordSet::candidate_by_id(const std::string& candidate_id) const {
    for (const auto& c : candidates) {
        if (c.id == candidate_id) return &c;
    }
    return nullptr;
}

json SampleRecordSet::to_json() const {
    json jc = json::array();
    for (const auto& c : candidates) jc.push_back(c.to_json());
    json jf = json::array();
    for (const auto& f : feedbacks) jf.push_back(f.to_json());
    json jv = json::array();
    for (const auto& v : verdicts) jv.push_back(v.to_json());
    json jp = json::array();
    for (const auto& p : pairs) jp.push_back(p.to_json());
    json jx = json::array();
    for (const auto& f : failures) jx.push_back(f.to_json());
    return json{{"sample_id", sample_id}, {"round", round},     {"candidates", jc},
                {"feedbacks", jf},        {"verdicts", jv},     {"pairs", jp},
                {"failures", jx},         {"status", to_string(status)}};
}

SampleRecordSet SampleRecordSet::from_json(const json& j) {
    SampleRecordSet r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.round = j.at("round").get<int>();
    for (const auto& e : j.at("candidates")) r.candidates.push_back(Candidate::from_json(e));
    for (const auto& e : j.at("feedbacks")) r.feedbacks.push_back(Feedback::from_json(e));
    for (const auto& e : j.at("verdicts")) r.verdicts.push_back(Verdict::from_json(e));
    for (const auto& e : j.at("pairs")) r.pairs.push_back(PreferencePair::from_json(e));
    for (const auto& e : j.at("failures")) r.failures.push_back(StageFailure::from_json(e));
    r.status = sample_status_from_string(j.at("status").get<std::string>());
    return r;
}

}  // namespace ipa
