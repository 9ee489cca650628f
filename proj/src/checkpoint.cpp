// Copyright 2026 The mtqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtqc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace mtqc {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

namespace {

constexpr char kMagic[8] = {'M', 'T', 'Q', 'C', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    T v;
    get_raw(&v, sizeof(T));
    return v;
  }
  void get_raw(void* out, std::size_t n) {
    if (n > size_ - pos_) throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: truncated payload");
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }
  bool at_end() const { return pos_ == size_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

void write_net(Writer& w, const Agent::Net& net) {
  const auto params = net.parameters();
  w.put<std::uint64_t>(params.size());
  for (float v : params) w.put<double>(static_cast<double>(v));
}

void read_net(Reader& r, Agent::Net& net) {
  const auto count = r.get<std::uint64_t>();
  auto params = net.parameters();
  if (count != params.size()) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: parameter block size mismatch");
  }
  for (auto& v : params) v = static_cast<float>(r.get<double>());
}

}  // namespace

nlohmann::json sac_config_to_json(const SacConfig& c) {
  nlohmann::json j = {{"obs_dim", c.obs_dim},
                      {"act_dim", c.act_dim},
                      {"hidden", c.hidden},
                      {"lr", c.lr},
                      {"discount", c.discount},
                      {"tau", c.tau},
                      {"batch_size", c.batch_size},
                      {"buffer_capacity", c.buffer_capacity},
                      {"initial_log_alpha", c.initial_log_alpha},
                      {"log_std_min", c.log_std_min},
                      {"log_std_max", c.log_std_max}};
  j["target_entropy"] = c.target_entropy ? nlohmann::json(*c.target_entropy) : nlohmann::json();
  j["fixed_alpha"] = c.fixed_alpha ? nlohmann::json(*c.fixed_alpha) : nlohmann::json();
  return j;
}

SacConfig sac_config_from_json(const nlohmann::json& j) {
  SacConfig c;
  c.obs_dim = j.at("obs_dim").get<int>();
  c.act_dim = j.at("act_dim").get<int>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.lr = j.at("lr").get<double>();
  c.discount = j.at("discount").get<double>();
  c.tau = j.at("tau").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
  c.initial_log_alpha = j.at("initial_log_alpha").get<double>();
  c.log_std_min = j.at("log_std_min").get<double>();
  c.log_std_max = j.at("log_std_max").get<double>();
  if (!j.at("target_entropy").is_null()) c.target_entropy = j.at("target_entropy").get<double>();
  if (!j.at("fixed_alpha").is_null()) c.fixed_alpha = j.at("fixed_alpha").get<double>();
  return c;
}

std::vector<std::uint8_t> serialize_checkpoint(const Agent& agent, std::uint64_t catalog_hash) {
  const SacConfig& c = agent.config();
  Writer w;
  w.put_raw(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint64_t>(catalog_hash);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.obs_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.act_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.hidden.size()));
  for (int h : c.hidden) w.put<std::uint32_t>(static_cast<std::uint32_t>(h));
  const std::string config = sac_config_to_json(c).dump();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(config.size()));
  w.put_raw(config.data(), config.size());
  w.put<double>(agent.log_alpha());
  w.put<std::uint64_t>(agent.updates());
  write_net(w, agent.policy());
  write_net(w, agent.q1());
  write_net(w, agent.q2());
  write_net(w, agent.q1_target());
  write_net(w, agent.q2_target());
  w.put<std::uint32_t>(crc_of(w.bytes().data(), w.bytes().size()));
  return std::move(w.bytes());
}

LoadedCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 4 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: bad magic");
  }
  Reader head(bytes.data() + sizeof(kMagic), bytes.size() - sizeof(kMagic));
  const auto version = head.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError(CheckpointErrorKind::kVersion,
                          "checkpoint: version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kCheckpointVersion) + ")");
  }
  if (bytes.size() < sizeof(kMagic) + 8) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: truncated payload");
  }
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + body, 4);
  if (stored_crc != crc_of(bytes.data(), body)) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: checksum mismatch");
  }

  Reader r(bytes.data() + sizeof(kMagic) + 4, body - sizeof(kMagic) - 4);
  const auto hash = r.get<std::uint64_t>();
  const auto obs = r.get<std::uint32_t>();
  const auto act = r.get<std::uint32_t>();
  const auto n_hidden = r.get<std::uint32_t>();
  if (n_hidden > 64) throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: bad layer count");
  std::vector<int> hidden(n_hidden);
  for (auto& h : hidden) h = static_cast<int>(r.get<std::uint32_t>());
  const auto config_len = r.get<std::uint32_t>();
  std::string config_text(config_len, '\0');
  r.get_raw(config_text.data(), config_len);
  SacConfig config;
  try {
    config = sac_config_from_json(nlohmann::json::parse(config_text));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, std::string("checkpoint: bad config block: ") + e.what());
  }
  if (config.obs_dim != static_cast<int>(obs) || config.act_dim != static_cast<int>(act) ||
      config.hidden != hidden) {
    throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: header and config disagree");
  }
  LoadedCheckpoint out{Agent(config, 0), hash};
  out.agent.set_log_alpha(r.get<double>());
  out.agent.set_updates(r.get<std::uint64_t>());
  read_net(r, out.agent.policy());
  read_net(r, out.agent.q1());
  read_net(r, out.agent.q2());
  read_net(r, out.agent.q1_target());
  read_net(r, out.agent.q2_target());
  if (!r.at_end()) throw CheckpointError(CheckpointErrorKind::kCorrupt, "checkpoint: trailing bytes");
  return out;
}

void save_checkpoint(const Agent& agent, std::uint64_t catalog_hash, const std::string& path) {
  const auto bytes = serialize_checkpoint(agent, catalog_hash);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw CheckpointError(CheckpointErrorKind::kIo, "checkpoint: cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw CheckpointError(CheckpointErrorKind::kIo, "checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError(CheckpointErrorKind::kIo, "checkpoint: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace mtqc
