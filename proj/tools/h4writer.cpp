#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "h4/gateway/server.hpp"
#include "h4/h4.hpp"

namespace {

std::shared_ptr<const h4::Keyboard> load_keyboard(const std::string& path) {
  return std::make_shared<const h4::Keyboard>(h4::load_code_table(path));
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw h4::Error("cannot write " + path);
  out << content;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H4-Writer: four-key Huffman text entry, code generation and evaluation"};
  app.require_subcommand(1);

  // gen-codes
  std::string gen_freqs, gen_config, gen_out;
  auto* gen = app.add_subcommand("gen-codes", "Generate a 4-ary Huffman code table");
  auto* gen_freqs_opt = gen->add_option("--freqs", gen_freqs, "Frequency file (<symbol>\\t<frequency>)")->check(CLI::ExistingFile);
  gen->add_option("--config", gen_config, "Config file: letter frequencies plus command frequencies")
      ->check(CLI::ExistingFile)
      ->excludes(gen_freqs_opt);
  gen->add_option("--out", gen_out, "Output code table (default stdout)");

  // kspc
  std::string kspc_table, kspc_freqs, kspc_mode = "weighted";
  auto* kspc = app.add_subcommand("kspc", "Theoretical keystrokes per character of a code table");
  kspc->add_option("--table", kspc_table, "Code table file")->required()->check(CLI::ExistingFile);
  kspc->add_option("--freqs", kspc_freqs, "Frequency file")->required()->check(CLI::ExistingFile);
  kspc->add_option("--mode", kspc_mode, "weighted | unweighted | both")
      ->check(CLI::IsMember({"weighted", "unweighted", "both"}));

  // schedule
  std::string sched_phrases, sched_out;
  std::size_t sched_participants = 9;
  std::vector<std::string> sched_devices{"mouse", "gamepad", "eye"};
  int sched_blocks = 3, sched_per_block = 3;
  std::uint64_t sched_seed = 2024;
  auto* sched = app.add_subcommand("schedule", "Counterbalanced participants x devices x blocks plan");
  sched->add_option("--phrases", sched_phrases, "Phrase set, one phrase per line")->required()->check(CLI::ExistingFile);
  sched->add_option("--participants", sched_participants, "Number of participants")->capture_default_str();
  sched->add_option("--devices", sched_devices, "Device labels")->delimiter(',')->capture_default_str();
  sched->add_option("--blocks", sched_blocks, "Blocks per device")->capture_default_str();
  sched->add_option("--per-block", sched_per_block, "Phrases per block")->capture_default_str();
  sched->add_option("--seed", sched_seed, "Random seed")->capture_default_str();
  sched->add_option("--out", sched_out, "Output schedule JSON (default stdout)");

  // simulate
  std::string sim_schedule, sim_table, sim_typist = "perfect", sim_out = ".";
  double sim_error = 0.05;
  bool sim_count_enter = false;
  auto* sim = app.add_subcommand("simulate", "Scripted typist over a schedule; writes session.jsonl and metrics.csv");
  sim->add_option("--schedule", sim_schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--table", sim_table, "Code table file")->required()->check(CLI::ExistingFile);
  sim->add_option("--typist", sim_typist, "perfect | noisy")->check(CLI::IsMember({"perfect", "noisy"}))->capture_default_str();
  sim->add_option("--error-prob", sim_error, "Slip probability per selection for the noisy typist")->capture_default_str();
  sim->add_flag("--count-enter", sim_count_enter, "Charge [enter] keystrokes to KSPC and efficiency");
  sim->add_option("--out-dir", sim_out, "Output directory")->capture_default_str();

  // analyze
  std::string an_store, an_table, an_reference, an_out, an_csv;
  auto* an = app.add_subcommand("analyze", "Replay a session store and report statistics");
  an->add_option("--store", an_store, "session.jsonl")->required()->check(CLI::ExistingFile);
  an->add_option("--table", an_table, "Code table the session was recorded with")->required()->check(CLI::ExistingFile);
  an->add_option("--reference", an_reference, "Reference results JSON shown for comparison")->check(CLI::ExistingFile);
  an->add_option("--out", an_out, "Report text (default stdout)");
  an->add_option("--csv", an_csv, "Plot-ready long-format CSV");

  // serve
  std::string srv_table, srv_phrases, srv_address = "127.0.0.1", srv_store, srv_static, srv_config;
  unsigned short srv_port = 8080;
  auto* srv = app.add_subcommand("serve", "Run the live WebSocket session service");
  srv->add_option("--table", srv_table, "Code table file")->required()->check(CLI::ExistingFile);
  srv->add_option("--phrases", srv_phrases, "Phrase set")->required()->check(CLI::ExistingFile);
  srv->add_option("--address", srv_address, "Listen address")->capture_default_str();
  srv->add_option("--port", srv_port, "Listen port")->capture_default_str();
  srv->add_option("--store", srv_store, "Append completed trials to this session.jsonl");
  srv->add_option("--static", srv_static, "Directory of client assets served over HTTP")->check(CLI::ExistingDirectory);
  srv->add_option("--config", srv_config, "Config file (seed, count-enter)")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_freqs.empty() && gen_config.empty()) throw h4::Error("gen-codes needs --freqs or --config");
      h4::SymbolFrequencyTable freqs = [&] {
        if (!gen_freqs.empty()) return h4::load_frequency_table(gen_freqs);
        const auto cfg = h4::load_config(gen_config);
        if (cfg.letters.empty()) throw h4::Error("config has no letters file");
        return h4::with_commands(h4::load_frequency_table(cfg.letters), cfg);
      }();
      write_or_print(gen_out, h4::serialize(h4::build_code_table(freqs)));
    } else if (*kspc) {
      const auto table = h4::load_code_table(kspc_table);
      const auto freqs = h4::load_frequency_table(kspc_freqs);
      if (kspc_mode == "both") {
        std::cout << "weighted " << format_real(h4::kspc_theoretical(table, freqs, h4::KspcMode::weighted)) << '\n'
                  << "unweighted " << format_real(h4::kspc_theoretical(table, freqs, h4::KspcMode::unweighted)) << '\n';
      } else {
        const auto mode = kspc_mode == "weighted" ? h4::KspcMode::weighted : h4::KspcMode::unweighted;
        std::cout << format_real(h4::kspc_theoretical(table, freqs, mode)) << '\n';
      }
    } else if (*sched) {
      const auto phrases = h4::experiment::load_phrase_set(sched_phrases);
      if (phrases.dropped_characters > 0)
        std::cerr << "warning: dropped " << phrases.dropped_characters << " characters outside a-z and space\n";
      const auto s = h4::experiment::make_schedule(sched_participants, sched_devices, sched_blocks,
                                                   sched_per_block, phrases, sched_seed);
      write_or_print(sched_out, h4::experiment::to_json(s).dump(2) + "\n");
    } else if (*sim) {
      const auto schedule = h4::experiment::load_schedule(sim_schedule);
      const auto keyboard = load_keyboard(sim_table);
      h4::experiment::TypistModel model;
      model.kind = sim_typist == "noisy" ? h4::experiment::TypistKind::noisy : h4::experiment::TypistKind::perfect;
      model.error_probability = sim_error;
      std::filesystem::create_directories(sim_out);
      const std::string store_path = sim_out + "/session.jsonl";
      std::filesystem::remove(store_path);
      h4::experiment::SessionStore store(store_path);
      h4::experiment::simulate_schedule(schedule, keyboard, model, sim_count_enter, store);
      std::ofstream csv(sim_out + "/metrics.csv");
      h4::experiment::write_metrics_csv(csv, store.snapshot());
      std::cerr << "simulated " << store.size() << " trials into " << store_path << '\n';
    } else if (*an) {
      const auto keyboard = load_keyboard(an_table);
      const auto records = h4::experiment::load_store(an_store, keyboard);
      std::optional<nlohmann::json> reference;
      if (!an_reference.empty()) {
        std::ifstream in(an_reference);
        reference = nlohmann::json::parse(in);
      }
      const auto report = h4::experiment::make_report(records, reference);
      write_or_print(an_out, report.text);
      if (!an_csv.empty()) write_or_print(an_csv, report.csv);
    } else if (*srv) {
      h4::Config cfg;
      if (!srv_config.empty()) cfg = h4::load_config(srv_config);
      h4::gateway::ServiceConfig service;
      service.keyboard = load_keyboard(srv_table);
      service.phrases = h4::experiment::load_phrase_set(srv_phrases).phrases;
      service.seed = cfg.seed;
      service.count_enter = cfg.count_enter;
      if (!srv_store.empty()) service.store = std::make_shared<h4::experiment::SessionStore>(srv_store);

      // Block the signals before any thread starts so only sigwait sees them.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      h4::gateway::Server server(std::move(service), srv_address, srv_port, srv_static);
      server.start();
      std::cerr << "listening on ws://" << srv_address << ':' << server.port() << "/\n";
      int sig = 0;
      sigwait(&signals, &sig);
      server.stop();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
