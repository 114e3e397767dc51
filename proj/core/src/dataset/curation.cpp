#include "tabqa/dataset/curation.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::dataset {

const std::string& default_generation_prompt() {
  static const std::string kPrompt =
      "You write question-answer pairs about the table shown in the image.\n"
      "Rules:\n"
      "- Use only values printed inside the table. Ignore running text, headers and footers of the "
      "page.\n"
      "- Two QA pair out of an image is sufficient.\n"
      "- Each question must combine a row condition with a column condition and have exactly one "
      "answer in the table.\n"
      "- The answer is the cell value as printed, with its unit, without explanation. If several "
      "cells qualify, list them.\n"
      "Output:\n"
      "- The response must be a valid JSON object with two keys: \"Question\" and \"Answer\".\n"
      "- Emit one such object per pair and no other text.\n"
      "Example:\n"
      "{\"Question\": \"What is the maximum allowable span of a 38x184 joist of grade No. 2 at "
      "400 mm spacing?\", \"Answer\": \"3.40 m\"}\n";
  return kPrompt;
}

namespace {

// Offsets of the first `limit` balanced {...} spans, skipping braces inside
// JSON strings.
std::vector<std::string_view> balanced_objects(std::string_view text, std::size_t limit) {
  std::vector<std::string_view> spans;
  std::size_t i = 0;
  while (i < text.size() && spans.size() < limit) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    int depth = 0;
    bool in_string = false;
    bool closed = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        spans.push_back(text.substr(start, i - start + 1));
        ++i;
        closed = true;
        break;
      }
    }
    if (!closed) break;
  }
  return spans;
}

std::string answer_text(const json& v) {
  auto scalar = [](const json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number() || x.is_boolean()) return x.dump();
    throw MalformedGeneration("answer element is not a scalar");
  };
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += ", ";
      out += scalar(x);
    }
    return out;
  }
  return scalar(v);
}

std::string clip(std::string_view s, std::size_t n = 300) {
  return std::string(s.substr(0, std::min(n, s.size())));
}

}  // namespace

std::vector<QAPair> parse_qa_reply(std::string_view reply) {
  auto spans = balanced_objects(reply, kMaxPairsPerImage);
  if (spans.empty()) throw MalformedGeneration("no JSON object in reply: " + clip(reply));
  std::vector<QAPair> pairs;
  for (auto span : spans) {
    json j = json::parse(span, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw MalformedGeneration("invalid JSON object: " + clip(span));
    }
    if (!j.contains("Question") || !j.contains("Answer") || !j["Question"].is_string()) {
      throw MalformedGeneration("object lacks Question/Answer: " + clip(span));
    }
    QAPair p{normalize_whitespace(j["Question"].get<std::string>()),
             normalize_whitespace(answer_text(j["Answer"]))};
    if (p.question.empty() || p.answer.empty()) {
      throw MalformedGeneration("empty Question or Answer: " + clip(span));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<QATriplet> generate_qa_pairs(const ingest::PageImage& page, const fs::path& manifest_root,
                                         gateway::ChatClient& generator,
                                         const GenerationOptions& options) {
  const fs::path image = manifest_root / page.image_path;
  if (!fs::exists(image)) throw MissingImage("image not found: " + image.string());

  gateway::ChatRequest request;
  request.model_id = options.model_id;
  request.max_output_tokens = options.max_output_tokens;
  request.temperature = options.temperature;
  request.messages.push_back(
      {gateway::Role::kUser,
       {gateway::ContentPart::of_image({read_file(image), "image/png"}),
        gateway::ContentPart::of_text(options.prompt)}});

  std::vector<QAPair> pairs;
  for (int attempt = 1;; ++attempt) {
    auto response = generator.complete(request);
    try {
      pairs = parse_qa_reply(response.text);
      break;
    } catch (const MalformedGeneration& e) {
      if (attempt == 2) throw MalformedGeneration(page.image_path + ": " + e.what());
    }
  }

  std::vector<QATriplet> out;
  std::set<std::string> seen;
  for (auto& p : pairs) {
    QATriplet t;
    t.id = triplet_id(page.content_hash, p.question);
    if (!seen.insert(t.id).second) continue;
    t.question = std::move(p.question);
    t.answer = std::move(p.answer);
    t.image_file = page.image_path;
    out.push_back(std::move(t));
  }
  return out;
}

CurationSummary curate(const ingest::Manifest& manifest, TripletStore& store,
                       gateway::ChatClient& generator, const CurationOptions& options) {
  const fs::path failures_path = store.dir() / "curation_failures.jsonl";
  std::set<std::string> curated;
  for (const auto& t : store.generated()) curated.insert(t.image_file);

  CurationSummary summary;
  std::vector<ingest::PageImage> pending;
  for (const auto& page : manifest.entries()) {
    ++summary.pages_considered;
    if (curated.count(page.image_path)) {
      ++summary.pages_skipped;
    } else {
      pending.push_back(page);
    }
  }

  std::map<std::string, json> failures;
  for (const auto& j : read_json_lines(failures_path)) {
    failures[j.value("image_file", "")] = j;
  }

  std::mutex writer;
  parallel_for(pending.size(), options.parallelism, [&](std::size_t i) {
    const auto& page = pending[i];
    std::vector<QATriplet> triplets;
    std::string kind, message;
    try {
      triplets = generate_qa_pairs(page, manifest.root(), generator, options.generation);
    } catch (const MalformedGeneration& e) {
      kind = e.kind();
      message = e.what();
    } catch (const EndpointError& e) {
      kind = e.kind();
      message = e.what();
    } catch (const MissingImage& e) {
      kind = e.kind();
      message = e.what();
    }
    std::lock_guard lock(writer);
    if (!kind.empty()) {
      ++summary.failures;
      failures[page.image_path] =
          ordered_json{{"image_file", page.image_path}, {"kind", kind}, {"message", message}};
      return;
    }
    failures.erase(page.image_path);
    for (const auto& t : triplets) summary.triplets_added += store.append(t) ? 1 : 0;
  });

  store.compact();
  std::vector<json> rows;
  for (auto& [image, j] : failures) rows.push_back(j);
  if (!rows.empty() || fs::exists(failures_path)) write_json_lines(failures_path, rows);
  return summary;
}

}  // namespace tabqa::dataset
