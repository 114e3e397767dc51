#include "tabqa/dataset/triplet.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::dataset {

std::string_view to_string(Provenance p) {
  return p == Provenance::kGenerated ? "generated" : "manually_validated";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "generated") return Provenance::kGenerated;
  if (s == "manually_validated") return Provenance::kManuallyValidated;
  throw ConfigError("unknown provenance: " + std::string(s));
}

std::string triplet_id(std::string_view image_hash, std::string_view question) {
  std::string key(image_hash);
  key += '\n';
  key += question;
  return sha256_hex(key).substr(0, 16);
}

ordered_json to_json(const QATriplet& t) {
  return {{"Question", t.question},
          {"Answer", t.answer},
          {"image_file", t.image_file},
          {"id", t.id},
          {"provenance", std::string(to_string(t.provenance))}};
}

QATriplet triplet_from_json(const json& j) {
  try {
    QATriplet t;
    t.question = j.at("Question").get<std::string>();
    t.answer = j.at("Answer").get<std::string>();
    t.image_file = j.at("image_file").get<std::string>();
    t.id = j.at("id").get<std::string>();
    t.provenance = provenance_from_string(j.value("provenance", "generated"));
    return t;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad triplet record: ") + e.what());
  }
}

ordered_json to_json(const TripletEdit& e) {
  ordered_json j;
  switch (e.op) {
    case TripletEdit::Op::kUpdate: j["op"] = "update"; break;
    case TripletEdit::Op::kAdd: j["op"] = "add"; break;
    case TripletEdit::Op::kRemove: j["op"] = "remove"; break;
  }
  if (!e.id.empty()) j["id"] = e.id;
  if (!e.image_file.empty()) j["image_file"] = e.image_file;
  if (e.question) j["Question"] = *e.question;
  if (e.answer) j["Answer"] = *e.answer;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

TripletEdit edit_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("edit must be a JSON object");
  TripletEdit e;
  const std::string op = j.value("op", "update");
  if (op == "update") {
    e.op = TripletEdit::Op::kUpdate;
  } else if (op == "add") {
    e.op = TripletEdit::Op::kAdd;
  } else if (op == "remove") {
    e.op = TripletEdit::Op::kRemove;
  } else {
    throw ConfigError("unknown edit op: " + op);
  }
  try {
    e.id = j.value("id", "");
    e.image_file = j.value("image_file", "");
    if (j.contains("Question")) e.question = j["Question"].get<std::string>();
    if (j.contains("Answer")) e.answer = j["Answer"].get<std::string>();
    e.note = j.value("note", "");
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad edit record: ") + ex.what());
  }
  if (e.op != TripletEdit::Op::kAdd && e.id.empty()) throw ConfigError("edit " + op + " needs an id");
  if (e.op == TripletEdit::Op::kAdd && (e.image_file.empty() || !e.question || !e.answer)) {
    throw ConfigError("add edit needs image_file, Question and Answer");
  }
  if (e.op == TripletEdit::Op::kUpdate && !e.question && !e.answer) {
    throw ConfigError("update edit " + e.id + " changes nothing");
  }
  return e;
}

TripletStore::TripletStore(fs::path dir) : dir_(std::move(dir)) {}

std::vector<QATriplet> TripletStore::generated() const {
  std::vector<QATriplet> out;
  for (const auto& j : read_json_lines(dir_ / kTripletsFile)) out.push_back(triplet_from_json(j));
  return out;
}

std::vector<TripletEdit> TripletStore::edits() const {
  std::vector<TripletEdit> out;
  for (const auto& j : read_json_lines(dir_ / kEditsFile)) out.push_back(edit_from_json(j));
  return out;
}

namespace {

// Replay without manifest checks: edits were validated when logged.
std::vector<QATriplet> replay_trusted(std::vector<QATriplet> base, std::span<const TripletEdit> edits) {
  std::map<std::string, QATriplet> by_id;
  for (auto& t : base) by_id.emplace(t.id, std::move(t));
  for (const auto& e : edits) {
    if (e.op == TripletEdit::Op::kRemove) {
      by_id.erase(e.id);
    } else if (e.op == TripletEdit::Op::kUpdate) {
      auto it = by_id.find(e.id);
      if (it == by_id.end()) continue;
      if (e.question) it->second.question = *e.question;
      if (e.answer) it->second.answer = *e.answer;
      it->second.provenance = Provenance::kManuallyValidated;
    } else {
      QATriplet t{e.id, *e.question, *e.answer, e.image_file, Provenance::kManuallyValidated};
      by_id.emplace(t.id, std::move(t));
    }
  }
  std::vector<QATriplet> out;
  out.reserve(by_id.size());
  for (auto& [id, t] : by_id) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::vector<QATriplet> TripletStore::triplets() const {
  auto log = edits();
  return replay_trusted(generated(), log);
}

bool TripletStore::append(const QATriplet& t) {
  for (const auto& existing : generated()) {
    if (existing.id == t.id) return false;
  }
  fs::create_directories(dir_);
  append_json_line(dir_ / kTripletsFile, to_json(t));
  return true;
}

void TripletStore::compact() {
  auto all = generated();
  std::sort(all.begin(), all.end(), [](const QATriplet& a, const QATriplet& b) {
    return std::tie(a.image_file, a.id) < std::tie(b.image_file, b.id);
  });
  std::vector<json> rows;
  rows.reserve(all.size());
  for (const auto& t : all) rows.push_back(json(to_json(t)));
  fs::create_directories(dir_);
  write_json_lines(dir_ / kTripletsFile, rows);
}

std::vector<QATriplet> replay_edits(std::vector<QATriplet> base, std::span<const TripletEdit> edits,
                                    const ingest::Manifest& manifest) {
  std::set<std::string> live;
  for (const auto& t : base) live.insert(t.id);
  std::vector<TripletEdit> resolved(edits.begin(), edits.end());
  for (auto& e : resolved) {
    if (e.question && normalize_whitespace(*e.question).empty()) {
      throw ConfigError("edit leaves an empty question");
    }
    if (e.answer && normalize_whitespace(*e.answer).empty()) {
      throw ConfigError("edit leaves an empty answer");
    }
    switch (e.op) {
      case TripletEdit::Op::kUpdate:
      case TripletEdit::Op::kRemove:
        if (!live.count(e.id)) throw ConfigError("edit names unknown triplet " + e.id);
        if (e.op == TripletEdit::Op::kRemove) live.erase(e.id);
        break;
      case TripletEdit::Op::kAdd: {
        auto page = manifest.find(e.image_file);
        if (!page) throw MissingImage("edit adds a triplet for unknown image " + e.image_file);
        e.id = triplet_id(page->content_hash, *e.question);
        if (!live.insert(e.id).second) throw ConfigError("edit adds duplicate triplet " + e.id);
        break;
      }
    }
  }
  return replay_trusted(std::move(base), resolved);
}

void TripletStore::apply_edits(std::span<const TripletEdit> new_edits, const ingest::Manifest& manifest) {
  auto current = triplets();
  replay_edits(current, new_edits, manifest);  // validation only
  fs::create_directories(dir_);
  for (TripletEdit e : new_edits) {
    if (e.op == TripletEdit::Op::kAdd) {
      e.id = triplet_id(manifest.find(e.image_file)->content_hash, *e.question);
    }
    append_json_line(dir_ / kEditsFile, to_json(e));
  }
}

std::vector<std::string> verify_triplets(std::span<const QATriplet> triplets,
                                         const ingest::Manifest& manifest) {
  std::vector<std::string> problems;
  std::set<std::string> ids;
  std::map<std::string, int> generated_per_image;
  for (const auto& t : triplets) {
    if (!ids.insert(t.id).second) problems.push_back("duplicate id " + t.id);
    if (normalize_whitespace(t.question).empty()) problems.push_back(t.id + ": empty question");
    if (normalize_whitespace(t.answer).empty()) problems.push_back(t.id + ": empty answer");
    if (!manifest.find(t.image_file)) {
      problems.push_back(t.id + ": image_file " + t.image_file + " not in manifest");
    } else if (!fs::exists(manifest.root() / t.image_file)) {
      problems.push_back(t.id + ": image " + t.image_file + " missing on disk");
    }
    if (t.provenance == Provenance::kGenerated) ++generated_per_image[t.image_file];
  }
  for (const auto& [image, n] : generated_per_image) {
    if (n > 2) problems.push_back(image + ": " + std::to_string(n) + " generated triplets");
  }
  return problems;
}

}  // namespace tabqa::dataset
