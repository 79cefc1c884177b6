#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "h4/huffman.hpp"
#include "h4/metrics.hpp"
#include "oracles.hpp"

using namespace h4;
using Catch::Approx;

namespace {

std::shared_ptr<const Keyboard> partial_keyboard() {
  static const auto kb =
      std::make_shared<const Keyboard>(load_code_table(std::string(H4_DATA_DIR) + "/h4_partial.tsv"));
  return kb;
}

Trial typed(const std::string& presented, std::string_view keys, std::int64_t start = 0, std::int64_t step = 100,
            bool count_enter = false) {
  Engine e(partial_keyboard(), presented, count_enter);
  std::int64_t t = start;
  for (char c : keys) {
    e.press(*direction_from_char(c), t);
    t += step;
  }
  return e.trial();
}

std::string random_string(std::mt19937_64& rng, std::size_t max_len) {
  std::string s(rng() % (max_len + 1), 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % 3);
  return s;
}

}  // namespace

TEST_CASE("msd", "[metrics]") {
  CHECK(msd("kitten", "kitten") == 0);
  CHECK(msd("", "abc") == 3);
  CHECK(msd("abc", "") == 3);
  CHECK(msd("the", "teh") == 2);
  CHECK(oracle::naive_msd("the", "teh") == 2);
  CHECK(msd("kitten", "sitting") == 3);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_string(rng, 8), b = random_string(rng, 8), c = random_string(rng, 8);
    INFO(a << " / " << b);
    CHECK(msd(a, b) == oracle::naive_msd(a, b));
    CHECK(msd(a, b) == msd(b, a));
    CHECK(msd(a, c) <= msd(a, b) + msd(b, c));
  }
}

TEST_CASE("entry speed", "[metrics]") {
  CHECK(entry_speed_wpm(11, 30.0) == Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(entry_speed_wpm(1, 30.0), Error);
  CHECK_THROWS_AS(entry_speed_wpm(5, 0.0), Error);

  // "tree get": t r e e _ g e t = 2+3+2+2+2+3+2+2 = 18 presses, one every
  // 500 ms from t=1000, so the last emission is at 9500 ms; [enter] follows.
  const Trial t = typed("tree get", "ULLULLRLRLLURDLRULDR", 1000, 500);
  REQUIRE(t.transcribed == "tree get");
  REQUIRE(t.finished);
  CHECK(trial_duration_s(t) == 8.5);
  // Hand recomputation: (8 - 1) / 5 * 60 / 8.5
  CHECK(entry_speed_wpm(t) == Approx(9.882352941176471).epsilon(1e-12));
}

TEST_CASE("theoretical KSPC", "[metrics]") {
  const auto& table = partial_keyboard()->table();
  std::vector<FrequencyEntry> eight;
  for (const char* s : {"e", "t", "r", "g", "b", "v", "q", "z"}) eight.push_back({Symbol::from_token(s), 1.0});
  const SymbolFrequencyTable letters(eight);
  CHECK(kspc_theoretical(table, letters, KspcMode::unweighted) == 3.75);
  CHECK(kspc_theoretical(table, letters, KspcMode::weighted) == Approx(3.75).epsilon(1e-15));

  std::vector<FrequencyEntry> four;
  for (const char* s : {"a", "b", "c", "d"}) four.push_back({Symbol::from_token(s), 0.25});
  const SymbolFrequencyTable eq(four);
  const auto gen = build_code_table(eq);
  CHECK(kspc_theoretical(gen, eq, KspcMode::weighted) == 1.0);
  CHECK(kspc_theoretical(gen, eq, KspcMode::unweighted) == 1.0);

  std::vector<FrequencyEntry> missing{{Symbol::from_token("a"), 1.0}};
  CHECK_THROWS_AS(kspc_theoretical(table, SymbolFrequencyTable(missing), KspcMode::unweighted), Error);
}

TEST_CASE("empirical KSPC and efficiency", "[metrics]") {
  const auto& table = partial_keyboard()->table();

  SECTION("error-free 'e'") {
    const Trial t = typed("e", "LR");
    CHECK(kspc_empirical(t) == 2.0);
    CHECK(efficiency(t, table) == 100.0);
  }
  SECTION("one correction: e, t by mistake, [bksp], e") {
    const Trial t = typed("ee", "LRULDDLR");
    REQUIRE(t.transcribed == "ee");
    CHECK(t.keystrokes.size() == 8);
    CHECK(t.corrected_count == 1);
    CHECK(kspc_empirical(t) == 4.0);
    CHECK(efficiency(t, table) == 50.0);
    CHECK(uncorrected_error_rate(t) == 0.0);
  }
  SECTION("k rejected presses then 'e'") {
    for (int k = 0; k < 5; ++k) {
      const Trial t = typed("e", std::string(k, 'R') + "LR");
      CHECK(efficiency(t, table) == Approx(2.0 / (2.0 + k) * 100.0));
    }
  }
  SECTION("empty transcription") {
    const Trial t = typed("e", "L");
    CHECK_THROWS_AS(kspc_empirical(t), Error);
    CHECK_THROWS_AS(efficiency(t, table), Error);
    const auto m = compute_metrics(t, table);
    CHECK_FALSE(m.kspc_empirical.has_value());
    CHECK_FALSE(m.wpm.has_value());
    CHECK(m.uncorrected_error_rate == 100.0);
  }
  SECTION("[enter] is excluded unless count-enter is set") {
    const Trial off = typed("e", "LRDR");
    CHECK(kspc_empirical(off) == 2.0);
    CHECK(efficiency(off, table) == 100.0);
    const Trial on = typed("e", "LRDR", 0, 100, true);
    CHECK(kspc_empirical(on) == 4.0);
    CHECK(efficiency(on, table) == 100.0);
  }
  SECTION("a trailing partial code lowers efficiency") {
    const Trial t = typed("ee", "LRL");
    CHECK(efficiency(t, table) < 100.0);
  }
}

TEST_CASE("backspace episodes cost efficiency and KSPC", "[metrics][property]") {
  const auto& table = partial_keyboard()->table();
  const std::string phrase = "tree";
  const Trial clean = typed(phrase, "ULLULLRLR");
  REQUIRE(clean.transcribed == phrase);
  // Insert a wrong 'g' (URD) plus [bksp] (DD) before each position in turn.
  const std::vector<std::string> codes{"UL", "LUL", "LR", "LR"};
  for (std::size_t at = 0; at < codes.size(); ++at) {
    std::string keys;
    for (std::size_t i = 0; i < codes.size(); ++i) keys += (i == at ? std::string("URDDD") : "") + codes[i];
    const Trial t = typed(phrase, keys);
    REQUIRE(t.transcribed == phrase);
    CHECK(efficiency(t, table) < efficiency(clean, table));
    CHECK(kspc_empirical(t) > kspc_empirical(clean));
  }
}

TEST_CASE("uncorrected error rate", "[metrics]") {
  CHECK(uncorrected_error_rate("hello", "hello") == 0.0);
  CHECK(uncorrected_error_rate("the", "teh") == Approx(200.0 / 3.0));
  CHECK(uncorrected_error_rate("abc", "") == 100.0);
  CHECK(uncorrected_error_rate("", "") == 0.0);
  CHECK(uncorrected_error_rate("ab", "abxyz") == 60.0);  // bounded by the longer string
}

TEST_CASE("metrics serialization", "[metrics][io]") {
  const auto& table = partial_keyboard()->table();
  const Trial t = typed("tree", "ULLULLRLRDR", 0, 333);
  const auto m = compute_metrics(t, table);
  REQUIRE(m.wpm.has_value());
  CHECK(metrics_from_json(nlohmann::json::parse(to_json(m).dump())) == m);
  const std::string row = metrics_csv_row(m);
  CHECK(std::count(row.begin(), row.end(), ',') == 5);
  CHECK(row.rfind(format_number(*m.wpm), 0) == 0);
}
