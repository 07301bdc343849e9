// Copyright 2026 The dsamp Authors
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

#include "dsamp/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace dsamp::nn {

namespace {

constexpr char kMagic[8] = {'D', 'S', 'C', 'K', 'P', 'T', '0', '1'};
constexpr int kSchemaVersion = 1;

void write_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw FormatError("checkpoint truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  nlohmann::json header = ck.meta;
  header["schema_version"] = kSchemaVersion;
  if (!header.contains("component"))
    throw FormatError("checkpoint meta missing component tag");
  nlohmann::json tlist = nlohmann::json::array();
  for (const auto& [name, t] : ck.tensors)
    tlist.push_back({{"name", name}, {"shape", t.shape}});
  header["tensors"] = tlist;

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open checkpoint for writing: " + path);
  const std::string hs = header.dump();
  os.write(kMagic, sizeof(kMagic));
  write_u64(os, hs.size());
  os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& [name, t] : ck.tensors)
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(t.numel() * sizeof(double)));
  if (!os) throw FormatError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("not a checkpoint file: " + path);
  const uint64_t hlen = read_u64(is);
  std::string hs(hlen, '\0');
  is.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw FormatError("checkpoint truncated: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(hs);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  if (header.value("schema_version", -1) != kSchemaVersion)
    throw FormatError("unsupported checkpoint schema version");
  if (!header.contains("component"))
    throw FormatError("checkpoint header missing component tag");

  Checkpoint ck;
  for (const auto& entry : header.at("tensors")) {
    Tensor t;
    t.shape = entry.at("shape").get<std::vector<int>>();
    size_t n = 1;
    for (int d : t.shape) {
      if (d < 1) throw FormatError("checkpoint tensor has invalid shape");
      n *= static_cast<size_t>(d);
    }
    t.v.resize(n);
    is.read(reinterpret_cast<char*>(t.v.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw FormatError("checkpoint tensor payload truncated: " + path);
    ck.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(t));
  }
  header.erase("tensors");
  ck.meta = std::move(header);
  return ck;
}

Checkpoint load_checkpoint_as(const std::string& path,
                              const std::string& expect_component) {
  Checkpoint ck = load_checkpoint(path);
  const std::string got = ck.meta.value("component", "");
  if (got != expect_component)
    throw ComponentError("checkpoint component mismatch: expected '" +
                         expect_component + "', found '" + got + "' in " + path);
  return ck;
}

nlohmann::json unet_config_to_json(const UNetConfig& cfg) {
  return {{"levels", cfg.levels},
          {"base_channels", cfg.base_channels},
          {"in_channels", cfg.in_channels},
          {"out_channels", cfg.out_channels}};
}

UNetConfig unet_config_from_json(const nlohmann::json& j) {
  UNetConfig cfg;
  cfg.levels = j.at("levels").get<int>();
  cfg.base_channels = j.at("base_channels").get<int>();
  cfg.in_channels = j.at("in_channels").get<int>();
  cfg.out_channels = j.at("out_channels").get<int>();
  cfg.validate();
  return cfg;
}

Checkpoint snapshot_net(const std::string& component, UNet& net,
                        const nlohmann::json& extra) {
  Checkpoint ck;
  ck.meta = extra;
  ck.meta["component"] = component;
  ck.meta["arch"] = unet_config_to_json(net.config());
  for (const auto& p : net.params()) ck.tensors.emplace_back(p.name, *p.value);
  return ck;
}

std::unique_ptr<UNet> restore_net(const Checkpoint& ck) {
  if (!ck.meta.contains("arch"))
    throw FormatError("checkpoint has no network architecture record");
  const UNetConfig cfg = unet_config_from_json(ck.meta.at("arch"));
  auto net = std::make_unique<UNet>(cfg, 0);
  for (const auto& p : net->params()) {
    const Tensor* t = ck.find(p.name);
    if (t == nullptr)
      throw FormatError("checkpoint missing tensor '" + p.name + "'");
    if (t->shape != p.value->shape)
      throw FormatError("checkpoint tensor '" + p.name + "' has wrong shape");
    *p.value = *t;
  }
  return net;
}

}  // namespace dsamp::nn
