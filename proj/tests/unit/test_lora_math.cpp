#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/workspace.hpp"
#include "tabqa/error.hpp"
#include "tabqa/lora/adapter_io.hpp"
#include "tabqa/lora/target_modules.hpp"

using namespace tabqa;
using namespace tabqa::lora;

namespace {

WeightMatrix filled(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  WeightMatrix m(r, c);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& v : m.data) v = u(rng);
  return m;
}

LoraUpdate update(std::size_t d, std::size_t k, std::size_t r, std::mt19937_64& rng) {
  LoraUpdate u;
  u.a = filled(d, r, rng);
  u.b = filled(r, k, rng);
  u.r = r;
  u.alpha = 32;
  return u;
}

}  // namespace

TEST_CASE("validation") {
  std::mt19937_64 rng(1);
  auto u = update(4, 5, 2, rng);
  CHECK_NOTHROW(u.validate());
  auto bad = u;
  bad.r = 3;
  CHECK_THROWS_AS(bad.validate(), ShapeMismatch);
  bad = u;
  bad.b = WeightMatrix(3, 5);
  CHECK_THROWS_AS(bad.validate(), ShapeMismatch);
  bad = update(2, 2, 2, rng);
  bad.a = WeightMatrix(2, 3);
  bad.b = WeightMatrix(3, 2);
  bad.r = 3;
  CHECK_THROWS_AS(bad.validate(), ShapeMismatch);
  bad = u;
  bad.a.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), NonFinite);
  bad = u;
  bad.alpha = 0;
  CHECK_THROWS(bad.validate());

  CHECK_THROWS_AS(merge(WeightMatrix(4, 4), u), ShapeMismatch);
  WeightMatrix w = filled(4, 5, rng);
  w.at(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(merge(w, u), NonFinite);
}

TEST_CASE("scale modes") {
  std::mt19937_64 rng(2);
  auto u = update(3, 4, 2, rng);
  auto plain = delta(u, ScaleMode::kUnscaled);
  auto scaled = delta(u, ScaleMode::kAlphaOverR);
  auto ab = oracle::multiply(oracle::to_dense(3, 2, u.a.data), oracle::to_dense(2, 4, u.b.data));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(plain.at(i, j) == doctest::Approx(ab[i][j]).epsilon(1e-12));
      CHECK(scaled.at(i, j) == doctest::Approx(16.0 * ab[i][j]).epsilon(1e-12));
    }
  }
  CHECK(scale_mode_from_string(to_string(ScaleMode::kAlphaOverR)) == ScaleMode::kAlphaOverR);
  CHECK_THROWS(scale_mode_from_string("other"));
}

TEST_CASE("rank bound follows the oracle on structured factors") {
  std::mt19937_64 rng(3);
  auto u = update(30, 20, 8, rng);
  CHECK(delta_rank_bound(u) == 8);
  for (std::size_t i = 0; i < 30; ++i) {
    u.a.at(i, 5) = u.a.at(i, 1) - u.a.at(i, 2);
    u.a.at(i, 6) = 0.5 * u.a.at(i, 3);
  }
  auto ab = oracle::multiply(oracle::to_dense(30, 8, u.a.data), oracle::to_dense(8, 20, u.b.data));
  CHECK(oracle::rank(ab) == 6);
  CHECK(delta_rank_bound(u) == 6);
  std::fill(u.b.data.begin(), u.b.data.end(), 0.0);
  CHECK(delta_rank_bound(u) == 0);
}

TEST_CASE("adapter files round trip") {
  std::mt19937_64 rng(4);
  std::vector<NamedAdapter> adapters;
  for (const char* name : {"model.layers.0.self_attn.q_proj", "model.layers.0.mlp.down_proj"}) {
    auto u = update(6, 4, 2, rng);
    for (auto* m : {&u.a, &u.b})
      for (auto& v : m->data) v = static_cast<float>(v);
    adapters.push_back({name, u});
  }
  testsupport::TempDir dir;
  const auto path = dir.path() / "adapter.bin";
  write_adapters(path, adapters);
  auto back = read_adapters(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].module == adapters[1].module);
  CHECK(back[0].update.a == adapters[0].update.a);
  CHECK(back[0].update.alpha == 32);
  const auto bytes = read_file(path);
  CHECK(bytes.substr(0, 4) == "LORA");
  CHECK(serialize_adapters(back) == bytes);

  auto w = filled(6, 4, rng);
  write_weight(dir.path() / "w.bin", w);
  CHECK(read_weight(dir.path() / "w.bin") == w);
}

TEST_CASE("corrupt adapter files are rejected") {
  std::mt19937_64 rng(5);
  std::vector<NamedAdapter> adapters{{"q_proj", update(3, 3, 1, rng)}};
  const auto bytes = serialize_adapters(adapters);
  CHECK_THROWS_AS(parse_adapters(""), AdapterFormatError);
  CHECK_THROWS_AS(parse_adapters("LORB" + bytes.substr(4)), AdapterFormatError);
  CHECK_THROWS_AS(parse_adapters(bytes.substr(0, bytes.size() - 1)), AdapterFormatError);
  std::string version = bytes;
  version[4] = 2;
  CHECK_THROWS_AS(parse_adapters(version), AdapterFormatError);
  std::string huge = bytes;
  huge[8] = huge[9] = huge[10] = huge[11] = '\xff';
  CHECK_THROWS_AS(parse_adapters(huge), AdapterFormatError);
  CHECK_THROWS_AS(parse_weight("WMAT"), AdapterFormatError);
}

TEST_CASE("target modules") {
  auto defaults = default_target_modules();
  CHECK(defaults == std::vector<std::string>{"q_proj", "k_proj", "v_proj", "gate_proj", "down_proj", "up_proj",
                                             "visual_proj"});
  TargetModuleSet set;
  CHECK(set.matches("model.layers.3.self_attn.k_proj"));
  CHECK(set.matches("visual_proj"));
  CHECK_FALSE(set.matches("model.layers.3.self_attn.o_proj"));
  CHECK_FALSE(set.matches("model.q_proj.bias_extra"));
  CHECK_THROWS_AS(TargetModuleSet({"not_a_layer"}), ConfigError);
  CHECK_THROWS_AS(TargetModuleSet(std::vector<std::string>{}), ConfigError);
  CHECK(module_registry().count("o_proj") == 1);
}
