#include <catch_amalgamated.hpp>

#include "h4/h4.hpp"

using namespace h4;
using namespace h4::gateway;
using nlohmann::json;

namespace {

std::shared_ptr<const Keyboard> partial_keyboard() {
  static const auto kb =
      std::make_shared<const Keyboard>(load_code_table(std::string(H4_DATA_DIR) + "/h4_partial.tsv"));
  return kb;
}

ServiceConfig config(std::shared_ptr<experiment::SessionStore> store = nullptr) {
  ServiceConfig c;
  c.keyboard = partial_keyboard();
  c.phrases = {"tree", "get", "greet tree"};
  c.seed = 17;
  c.phrases_per_block = 2;
  c.store = std::move(store);
  return c;
}

json hello() { return {{"kind", "hello"}, {"participant", "p01"}, {"device", "gamepad"}}; }

json key(char d, std::int64_t t) { return {{"kind", "keystroke"}, {"d", std::string(1, d)}, {"t", t}}; }

std::vector<Frame> type(Session& s, const std::string& keys, std::int64_t& t) {
  std::vector<Frame> all;
  for (char c : keys) {
    auto frames = s.handle(key(c, t += 250));
    all.insert(all.end(), frames.begin(), frames.end());
  }
  return all;
}

std::string keys_for(const std::string& phrase, bool with_enter = true) {
  std::string keys = to_string(encode_text(partial_keyboard()->table(), phrase));
  if (with_enter) keys += to_string(partial_keyboard()->table().code(enter_symbol()));
  return keys;
}

}  // namespace

TEST_CASE("hello opens a trial with the root layout", "[session]") {
  Session s(config());
  const auto frames = s.handle(hello());
  REQUIRE(frames.size() == 1);
  const auto& f = frames[0];
  CHECK(f["kind"] == "layout");
  CHECK(f["id"] == 1);
  CHECK(f["trial"] == 1);
  CHECK(f["depth"] == 0);
  CHECK(f["transcribed"] == "");
  const auto& cfg = config().phrases;
  CHECK(std::find(cfg.begin(), cfg.end(), f["presented"].get<std::string>()) != cfg.end());

  // The four boxes partition the alphabet.
  std::multiset<std::string> seen;
  for (const char* d : {"L", "R", "U", "D"})
    for (const auto& tok : f["boxes"][d]) seen.insert(tok.get<std::string>());
  std::multiset<std::string> all;
  for (const auto& [sym, code] : partial_keyboard()->table().codes()) all.insert(sym.token());
  CHECK(seen == all);
  CHECK(f["boxes"]["R"].empty());

  // A repeated hello re-syncs the same trial.
  const auto again = s.handle(hello());
  CHECK(again[0]["presented"] == f["presented"]);
  CHECK(again[0]["trial"] == 1);
}

TEST_CASE("keystrokes descend, emit and reject", "[session]") {
  Session s(config());
  s.handle(hello());
  auto f = s.handle(key('L', 100));
  REQUIRE(f.size() == 1);
  CHECK(f[0]["kind"] == "state");
  CHECK(f[0]["depth"] == 1);
  CHECK(f[0]["boxes"]["R"] == json::array({"e"}));

  f = s.handle(key('R', 200));
  REQUIRE(f.size() == 2);
  CHECK(f[0]["kind"] == "emitted");
  CHECK(f[0]["symbol"] == "e");
  CHECK(f[1]["kind"] == "state");
  CHECK(f[1]["transcribed"] == "e");
  CHECK(f[1]["depth"] == 0);

  f = s.handle(key('R', 300));  // empty box at the root
  REQUIRE(f.size() == 2);
  CHECK(f[0]["kind"] == "rejected");
  CHECK(f[0]["d"] == "R");
  CHECK(f[1]["kind"] == "state");
  CHECK(f[0]["id"].get<int>() < f[1]["id"].get<int>());

  f = s.handle({{"kind", "metrics"}});
  REQUIRE(f.size() == 1);
  CHECK(f[0]["kind"] == "metrics");
  CHECK(f[0]["metrics"].contains("kspc"));
}

TEST_CASE("a completed trial is stored and reported", "[session]") {
  auto store = std::make_shared<experiment::SessionStore>();
  Session s(config(store));
  const std::string phrase = s.handle(hello())[0]["presented"];
  std::int64_t t = 0;
  const auto frames = type(s, keys_for(phrase), t);

  int states = 0;
  std::int64_t last_id = 1;
  for (const auto& f : frames) {
    CHECK(f["id"].get<std::int64_t>() > last_id);
    last_id = f["id"];
    if (f["kind"] == "state") ++states;
    CHECK(f["kind"] != "error");
  }
  CHECK(states == static_cast<int>(keys_for(phrase).size()));
  REQUIRE(frames.back()["kind"] == "trial-done");
  CHECK(frames.back()["metrics"]["efficiency"] == 100.0);
  CHECK(frames.back()["metrics"]["uncorrected_error_rate"] == 0.0);

  REQUIRE(store->size() == 1);
  const auto rec = store->snapshot()[0];
  CHECK(rec.key.participant == "p01");
  CHECK(rec.key.device == "gamepad");
  CHECK(rec.key.block == 1);
  CHECK(rec.trial.transcribed == phrase);
  CHECK(rec.table_hash == partial_keyboard()->hash());

  // Further keys are refused until the next hello.
  CHECK(s.handle(key('L', t + 1000))[0]["kind"] == "error");
  const auto next = s.handle(hello());
  CHECK(next[0]["trial"] == 2);
  CHECK(next[0]["transcribed"] == "");

  // The third trial falls in block 2 with two phrases per block.
  for (int i = 0; i < 2; ++i) {
    const std::string p = s.engine()->trial().presented;
    type(s, keys_for(p), t);
    s.handle(hello());
  }
  REQUIRE(store->size() == 3);
  CHECK(store->snapshot()[2].key.block == 2);
  CHECK(store->snapshot()[2].key.phrase_index == 0);
}

TEST_CASE("wrong selections are flagged", "[session]") {
  Session s(config());
  const std::string phrase = s.handle(hello())[0]["presented"];
  const Symbol first = text_to_symbols(phrase).front();
  const Symbol other = first == Symbol::from_char('g') ? Symbol::from_char('b') : Symbol::from_char('g');
  std::int64_t t = 0;
  const auto frames = type(s, to_string(partial_keyboard()->table().code(other)), t);
  bool flagged = false;
  for (const auto& f : frames)
    if (f["kind"] == "emitted") flagged = f["wrong"].get<bool>();
  CHECK(flagged);
}

TEST_CASE("identical transcripts echo identically", "[session]") {
  auto run = [](std::int64_t step) {
    Session s(config());
    std::vector<std::string> out;
    const std::string phrase = s.handle(hello())[0]["presented"];
    std::int64_t t = 0;
    for (char c : "UL" + keys_for(phrase, false) + "DDDD" + keys_for(phrase)) {
      for (const auto& f : s.handle(key(c, t += step))) out.push_back(canonical(f).dump());
    }
    for (const auto& f : s.handle({{"kind", "metrics"}})) out.push_back(canonical(f).dump());
    return out;
  };
  const auto a = run(200);
  CHECK(a == run(200));
  CHECK(a == run(731));  // timing-dependent fields are stripped
}

TEST_CASE("malformed client frames get error frames", "[session]") {
  Session s(config());
  auto first = s.handle(key('L', 1));
  CHECK(first[0]["kind"] == "error");
  CHECK(first[0]["id"] == 1);

  CHECK(s.handle_text("not json")[0].find("\"kind\":\"error\"") != std::string::npos);
  CHECK(s.handle(json::array())[0]["kind"] == "error");
  CHECK(s.handle({{"kind", "dance"}})[0]["kind"] == "error");
  s.handle(hello());
  CHECK(s.handle({{"kind", "keystroke"}, {"d", "X"}, {"t", 5}})[0]["kind"] == "error");
  CHECK(s.handle({{"kind", "keystroke"}, {"d", "L"}})[0]["kind"] == "error");
  CHECK(s.handle({{"kind", "keystroke"}, {"t", 5}})[0]["kind"] == "error");
  s.handle(key('L', 100));
  CHECK(s.handle(key('L', 50))[0]["kind"] == "error");  // time went backwards

  const auto text = s.handle_text(R"({"kind":"keystroke","d":"L","t":200})");
  REQUIRE(text.size() == 2);
  CHECK(json::parse(text[0])["symbol"] == "[space]");

  ServiceConfig bad = config();
  bad.phrases = {"hello"};
  CHECK_THROWS_AS(Session(bad), Error);
  bad.phrases = {};
  CHECK_THROWS_AS(Session(bad), Error);
}
