#include <doctest.h>

#include "kgfuse/model.hpp"

using namespace kgfuse;

namespace {

// Straight transcription of the boolean matching expression, kept apart from
// the library code so the two can be compared.
bool oracle(const ApiPacket& q, const ApiPacket& c) {
  const bool name_ok = q.name.has_value() && c.name.has_value() && *q.name == *c.name;
  const bool container_ok = !q.container.has_value() || (c.container.has_value() && *q.container == *c.container);
  const bool count_ok = !q.param_count.has_value() || (c.param_count.has_value() && *q.param_count == *c.param_count);
  return name_ok && container_ok && count_ok;
}

std::vector<ApiPacket> all_packets() {
  const std::vector<std::optional<std::string>> names = {std::nullopt, "add()", "remove()"};
  const std::vector<std::optional<std::string>> containers = {std::nullopt, "java.util.List", "java.util.Collection"};
  const std::vector<std::optional<int>> counts = {std::nullopt, 1, 2};
  std::vector<ApiPacket> out;
  for (const auto& n : names)
    for (const auto& c : containers)
      for (const auto& k : counts) out.push_back({n, c, k});
  return out;
}

}  // namespace

TEST_CASE("match_api_packet examples") {
  CHECK(match_api_packet({"add()", std::nullopt, std::nullopt}, {"add()", "java.util.List", 1}));
  CHECK_FALSE(match_api_packet({"add()", "java.util.List", 1}, {"add()", "java.util.Collection", 1}));
  CHECK_FALSE(match_api_packet({std::nullopt, "java.util.List", 1}, {"add()", "java.util.List", 1}));
  CHECK(match_api_packet({"add()", " java.util.List ", 1}, {"add()", "java.util.List", 1}));
}

TEST_CASE("match_api_packet agrees with the brute-force expression") {
  const auto packets = all_packets();
  REQUIRE(packets.size() == 27);
  int pairs = 0;
  for (const auto& q : packets)
    for (const auto& c : packets) {
      CHECK(match_api_packet(q, c) == oracle(q, c));
      ++pairs;
    }
  CHECK(pairs == 729);
}

TEST_CASE("match_api_packet reflexivity and relaxation monotonicity") {
  for (const auto& p : all_packets()) {
    if (!p.name || !p.container || !p.param_count) continue;
    CHECK(match_api_packet(p, p));
    for (const auto& c : all_packets()) {
      if (!match_api_packet(p, c)) continue;
      CHECK(match_api_packet({p.name, std::nullopt, p.param_count}, c));
      CHECK(match_api_packet({p.name, p.container, std::nullopt}, c));
      CHECK(match_api_packet({p.name, std::nullopt, std::nullopt}, c));
    }
  }
}

TEST_CASE("packet rendering") {
  CHECK(to_string(ApiPacket{"parse()", std::nullopt, std::nullopt}) == "<parse(), null, null>");
  CHECK(to_string(ApiPacket{"add()", "java.util.List", 1}) == "<add(), java.util.List, 1>");
}
