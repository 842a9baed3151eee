// Copyright 2026 The setproto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setproto/interface/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "setproto/error.hpp"

namespace setproto {
namespace fs = std::filesystem;
namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kTensors = "tensors.bin";

void append_f32(std::string& buf, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double read_f32(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return static_cast<double>(std::bit_cast<float>(bits));
}

void write_atomic(const fs::path& target, const std::string& bytes) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw CheckpointError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw CheckpointError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  if (!fs::exists(path)) throw CheckpointError("checkpoint file missing: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::json bank_to_json(const Model& model) {
  const PrototypeBank& b = model.bank;
  nlohmann::json items = nlohmann::json::array();
  for (Eigen::Index k = 0; k < b.membership.rows(); ++k) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index j = 0; j < b.membership.cols(); ++j) {
      if (b.membership(k, j) == 0.0 && b.importance(k, j) == 0.0 && b.delta(k, j) == 0.0) continue;
      entries.push_back({{"skill", j},
                         {"gamma_s", b.membership(k, j)},
                         {"gamma_lv", b.importance(k, j)},
                         {"delta", b.delta(k, j)}});
    }
    items.push_back({{"id", k}, {"entries", std::move(entries)}});
  }
  return {{"discrete", b.discrete},
          {"items", std::move(items)},
          {"salary_means", model.prototype_salary_means}};
}

void bank_from_json(const nlohmann::json& j, Model& model) {
  const int m = model.config.n_prototypes;
  const int n = model.config.n_skills;
  PrototypeBank b = PrototypeBank::empty(m, n);
  b.discrete = j.at("discrete").get<bool>();
  const auto& items = j.at("items");
  if (!items.is_array() || static_cast<int>(items.size()) != m)
    throw CheckpointError("manifest lists " + std::to_string(items.size()) + " prototypes, model has " +
                          std::to_string(m));
  for (const auto& item : items) {
    const int k = item.at("id").get<int>();
    if (k < 0 || k >= m) throw CheckpointError("prototype id out of range: " + std::to_string(k));
    for (const auto& e : item.at("entries")) {
      const int s = e.at("skill").get<int>();
      if (s < 0 || s >= n) throw CheckpointError("prototype skill id out of range: " + std::to_string(s));
      const double gs = e.at("gamma_s").get<double>();
      if (gs != 0.0 && gs != 1.0) throw CheckpointError("prototype membership must be 0 or 1");
      b.membership(k, s) = gs;
      b.importance(k, s) = e.at("gamma_lv").get<double>();
      b.delta(k, s) = e.at("delta").get<double>();
    }
  }
  model.bank = std::move(b);
  model.prototype_salary_means = j.at("salary_means").get<std::vector<double>>();
}

}  // namespace

nlohmann::json vocabulary_to_json(const SkillVocabulary& vocab) {
  nlohmann::json schema = nlohmann::json::array();
  for (const auto& f : vocab.context_schema()) {
    if (f.kind == ContextField::Kind::kCategorical) {
      schema.push_back({{"name", f.name}, {"kind", "categorical"}, {"categories", f.categories}});
    } else {
      schema.push_back({{"name", f.name}, {"kind", "numeric"}, {"mean", f.mean}, {"stddev", f.stddev}});
    }
  }
  return {{"skills", vocab.skills()}, {"levels", vocab.levels()}, {"context_schema", std::move(schema)}};
}

SkillVocabulary vocabulary_from_json(const nlohmann::json& j) {
  std::vector<ContextField> schema;
  for (const auto& f : j.at("context_schema")) {
    ContextField field;
    field.name = f.at("name").get<std::string>();
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "categorical") {
      field.kind = ContextField::Kind::kCategorical;
      field.categories = f.at("categories").get<std::vector<std::string>>();
    } else if (kind == "numeric") {
      field.kind = ContextField::Kind::kNumeric;
      field.mean = f.at("mean").get<double>();
      field.stddev = f.at("stddev").get<double>();
    } else {
      throw CheckpointError("unknown context field kind '" + kind + "'");
    }
    schema.push_back(std::move(field));
  }
  return SkillVocabulary(j.at("skills").get<std::vector<std::string>>(),
                         j.at("levels").get<std::vector<std::string>>(), std::move(schema));
}

nlohmann::json model_config_to_json(const ModelConfig& c) {
  return {{"n_skills", c.n_skills},
          {"n_levels", c.n_levels},
          {"embed_dim", c.embed_dim},
          {"n_views", c.n_views},
          {"n_prototypes", c.n_prototypes},
          {"transform_hidden", c.transform_hidden},
          {"level_dim", c.level_dim},
          {"context_hidden", c.context_hidden},
          {"epsilon", c.epsilon},
          {"theta_min", c.theta_min},
          {"density_floor", c.density_floor},
          {"variant", to_string(c.variant)}};
}

ModelConfig model_config_from_json(const nlohmann::json& j, const SkillVocabulary& vocab) {
  ModelConfig c;
  c.n_skills = j.at("n_skills").get<int>();
  c.n_levels = j.at("n_levels").get<int>();
  c.embed_dim = j.at("embed_dim").get<int>();
  c.n_views = j.at("n_views").get<int>();
  c.n_prototypes = j.at("n_prototypes").get<int>();
  c.transform_hidden = j.at("transform_hidden").get<int>();
  c.level_dim = j.at("level_dim").get<int>();
  c.context_hidden = j.at("context_hidden").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.theta_min = j.at("theta_min").get<double>();
  c.density_floor = j.at("density_floor").get<double>();
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.context_schema = vocab.context_schema();
  if (c.n_skills != vocab.n_skills() || c.n_levels != vocab.n_levels())
    throw CheckpointError("model settings disagree with the stored vocabulary");
  c.validate();
  return c;
}

void save_checkpoint(const fs::path& dir, const Model& model, const SkillVocabulary& vocab,
                     const nlohmann::json& training) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CheckpointError("cannot create checkpoint directory " + dir.string() + ": " + ec.message());

  std::string bytes;
  nlohmann::json index = nlohmann::json::array();
  for (const auto& t : model.params.tensors()) {
    const Matrix& m = *t.value;
    const std::size_t offset = bytes.size();
    for (Eigen::Index i = 0; i < m.size(); ++i) append_f32(bytes, m.data()[i]);
    index.push_back({{"name", t.name},
                     {"shape", {m.rows(), m.cols()}},
                     {"offset", offset},
                     {"length", bytes.size() - offset}});
  }
  nlohmann::json manifest = {{"format_version", kCheckpointFormatVersion},
                             {"model", model_config_to_json(model.config)},
                             {"vocabulary", vocabulary_to_json(vocab)},
                             {"prototypes", bank_to_json(model)},
                             {"training", training},
                             {"tensors", std::move(index)}};
  write_atomic(dir / kTensors, bytes);
  write_atomic(dir / kManifest, manifest.dump(2) + "\n");
}

Checkpoint load_checkpoint(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifest;
  const fs::path tensors_path = dir / kTensors;
  const std::string text = read_file(manifest_path);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CheckpointError("cannot parse " + manifest_path.string() + ": " + e.what());
  }
  Checkpoint ck;
  try {
    const auto version = manifest.at("format_version");
    if (!version.is_number_integer() || version.get<int>() != kCheckpointFormatVersion)
      throw CheckpointError("unsupported checkpoint format_version " + version.dump() +
                            " (this build reads version " + std::to_string(kCheckpointFormatVersion) + ")");
    ck.vocab = vocabulary_from_json(manifest.at("vocabulary"));
    ck.model.config = model_config_from_json(manifest.at("model"), ck.vocab);
    ck.model.params = ModelParams::zeros(ck.model.config);
    bank_from_json(manifest.at("prototypes"), ck.model);
    ck.training = manifest.value("training", nlohmann::json(nullptr));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("malformed manifest " + manifest_path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError("invalid model settings in " + manifest_path.string() + ": " + e.what());
  }

  const std::string bytes = read_file(tensors_path);
  std::map<std::string, nlohmann::json> entries;
  try {
    for (const auto& e : manifest.at("tensors")) entries[e.at("name").get<std::string>()] = e;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("malformed tensor index in " + manifest_path.string() + ": " + e.what());
  }
  std::size_t covered = 0;
  std::string last;
  for (auto& t : ck.model.params.tensors()) {
    auto it = entries.find(t.name);
    if (it == entries.end()) throw CheckpointError("tensor '" + t.name + "' missing from manifest");
    Matrix& m = *t.value;
    std::size_t offset = 0;
    std::size_t length = 0;
    std::vector<Eigen::Index> shape;
    try {
      offset = it->second.at("offset").get<std::size_t>();
      length = it->second.at("length").get<std::size_t>();
      shape = it->second.at("shape").get<std::vector<Eigen::Index>>();
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError("malformed index entry for tensor '" + t.name + "': " + e.what());
    }
    if (shape.size() != 2 || shape[0] != m.rows() || shape[1] != m.cols())
      throw CheckpointError("tensor '" + t.name + "' has shape " + nlohmann::json(shape).dump() +
                            ", model expects [" + std::to_string(m.rows()) + "," +
                            std::to_string(m.cols()) + "]");
    if (length != static_cast<std::size_t>(m.size()) * 4)
      throw CheckpointError("tensor '" + t.name + "' length " + std::to_string(length) +
                            " does not match its shape");
    if (offset > bytes.size() || length > bytes.size() - offset)
      throw CheckpointError("tensor '" + t.name + "' extends past the end of " + tensors_path.string() +
                            " (" + std::to_string(bytes.size()) + " bytes)");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + offset;
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = read_f32(p + 4 * i);
    if (offset + length >= covered) {
      covered = offset + length;
      last = t.name;
    }
    entries.erase(it);
  }
  if (!entries.empty())
    throw CheckpointError("manifest lists unknown tensor '" + entries.begin()->first + "'");
  if (covered != bytes.size())
    throw CheckpointError(tensors_path.string() + " has " + std::to_string(bytes.size() - covered) +
                          " bytes beyond the end of tensor '" + last + "'");
  return ck;
}

}  // namespace setproto
