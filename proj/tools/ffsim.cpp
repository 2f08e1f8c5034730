// ffsim: scenario runner and utilities for the two-agent debris-push
// mission simulator.
//
//   ffsim run <scenario> [--seed N] [--out DIR] [--no-physics]
//   ffsim sweep <scenario> --param NAME --values a,b,c [--out DIR]
//   ffsim filter <csv> [--order 4] [--fc 50] [--fs 500] [--out FILE]
//   ffsim codec decode <hex|->
//   ffsim codec encode <json|->
//
// Exit codes: 0 success, 2 mission incomplete, 1 errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "ffsim/coap/codec.hpp"
#include "ffsim/energy/butterworth.hpp"
#include "ffsim/mission/runner.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return arg;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, bool no_physics,
            const std::string& server_log_path) {
  ffsim::mission::Scenario sc = ffsim::mission::load_scenario(scenario_path);
  ffsim::mission::RunOptions opt;
  opt.physics = !no_physics;
  opt.seed_override = seed;
  ffsim::mission::RunReport report = ffsim::mission::run(sc, opt);

  auto written = ffsim::mission::emit_outputs(report, sc, out_dir);
  if (!server_log_path.empty()) {
    std::ofstream out(server_log_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + server_log_path);
    out << ffsim::mission::server_log_to_jsonl(report);
    written.push_back(server_log_path);
  }

  for (const std::string& path : written) std::cout << "wrote " << path << "\n";
  if (report.sync_error_ms)
    std::cout << "sync_error_ms " << *report.sync_error_ms << "\n";
  if (!report.mission_complete) {
    std::cout << "mission_incomplete (phase " << report.stall_phase << ")\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param,
              const std::string& values_csv, const std::string& out_dir) {
  ffsim::mission::Scenario base = ffsim::mission::load_scenario(scenario_path);

  std::vector<double> values;
  std::stringstream ss(values_csv);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (values.empty()) throw std::runtime_error("sweep needs at least one value");

  auto configure = [&](double v) {
    ffsim::mission::Scenario sc = base;
    ffsim::mission::RunOptions opt;
    opt.physics = false;
    if (param == "clock_offset_master") sc.master.clock.offset_ms = v;
    else if (param == "clock_offset_slave") sc.slave.clock.offset_ms = v;
    else if (param == "clock_drift_master") sc.master.clock.drift_ppm = v;
    else if (param == "clock_drift_slave") sc.slave.clock.drift_ppm = v;
    else if (param == "jitter_ms") sc.link.jitter_ms = v;
    else if (param == "loss_prob") sc.link.loss_prob = v;
    else if (param == "seed") opt.seed_override = static_cast<std::uint64_t>(v);
    else throw std::runtime_error("unknown sweep parameter: " + param);
    sc.validate();
    return std::make_pair(sc, opt);
  };
  // Validate the parameter name before spawning workers.
  configure(values.front());

  // Runs share nothing; fan out across threads and merge in input order.
  std::vector<std::future<ffsim::mission::RunReport>> jobs;
  for (double v : values) {
    jobs.push_back(std::async(std::launch::async, [&, v] {
      auto [sc, opt] = configure(v);
      return ffsim::mission::run(sc, opt);
    }));
  }

  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    ffsim::mission::RunReport r = jobs[i].get();
    ordered_json row;
    row["param"] = param;
    row["value"] = values[i];
    row["mission_complete"] = r.mission_complete;
    row["sync_error_ms"] =
        r.sync_error_ms ? ordered_json(*r.sync_error_ms) : ordered_json(nullptr);
    row["master_energy_uj"] = r.master.energy_uj;
    row["slave_energy_uj"] = r.slave.energy_uj;
    row["messages_lost"] = r.messages.lost;
    rows.push_back(row);
    std::cout << param << "=" << values[i] << " sync_error_ms="
              << (r.sync_error_ms ? std::to_string(*r.sync_error_ms) : "n/a")
              << (r.mission_complete ? "" : " (incomplete)") << "\n";
  }

  std::filesystem::create_directories(out_dir);
  std::string path = out_dir + "/sweep.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << rows.dump(2) << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_filter(const std::string& csv_path, int order, double fc, double fs,
               const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  ffsim::energy::CurrentTrace trace = ffsim::energy::read_trace_csv(in);
  if (fs <= 0.0) fs = trace.fs_hz;

  ffsim::energy::IirCoeffs coeffs = ffsim::energy::butterworth_lowpass(order, fc, fs);
  ffsim::energy::CurrentTrace filtered = ffsim::energy::apply_filter(coeffs, trace);

  if (out_path.empty() || out_path == "-") {
    ffsim::energy::write_trace_csv(std::cout, filtered);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    ffsim::energy::write_trace_csv(out, filtered);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

ordered_json message_to_json(const ffsim::coap::Message& m) {
  ordered_json j;
  j["type"] = ffsim::coap::type_name(m.type);
  j["code"] = ffsim::coap::code_name(m.code);
  j["mid"] = m.message_id;
  j["token"] = ffsim::coap::to_hex(m.token);
  ordered_json options = ordered_json::array();
  for (const auto& o : m.options) {
    ordered_json oj;
    oj["number"] = o.number;
    oj["value"] = std::string(o.value.begin(), o.value.end());
    options.push_back(oj);
  }
  j["options"] = options;
  j["payload"] = m.payload_text();
  return j;
}

ffsim::coap::Message message_from_json(const ordered_json& j) {
  ffsim::coap::Message m;
  std::string type = j.value("type", "CON");
  if (type == "CON") m.type = ffsim::coap::Type::Confirmable;
  else if (type == "NON") m.type = ffsim::coap::Type::NonConfirmable;
  else if (type == "ACK") m.type = ffsim::coap::Type::Ack;
  else if (type == "RST") m.type = ffsim::coap::Type::Reset;
  else throw std::runtime_error("unknown type: " + type);

  std::string code = j.value("code", "GET");
  using Code = ffsim::coap::Code;
  if (code == "GET") m.code = Code::Get;
  else if (code == "PUT") m.code = Code::Put;
  else if (code == "0.00") m.code = Code::Empty;
  else if (code == "2.01") m.code = Code::Created;
  else if (code == "2.04") m.code = Code::Changed;
  else if (code == "2.05") m.code = Code::Content;
  else if (code == "4.00") m.code = Code::BadRequest;
  else if (code == "4.04") m.code = Code::NotFound;
  else throw std::runtime_error("unknown code: " + code);

  m.message_id = j.value("mid", 0);
  m.token = ffsim::coap::from_hex(j.value("token", ""));
  if (j.contains("options")) {
    for (const auto& oj : j["options"]) {
      ffsim::coap::Option o;
      o.number = oj.value("number", 0);
      std::string v = oj.value("value", "");
      o.value.assign(v.begin(), v.end());
      m.options.push_back(o);
    }
  }
  std::string payload = j.value("payload", "");
  m.payload.assign(payload.begin(), payload.end());
  return m;
}

int cmd_codec(const std::string& mode, const std::string& input) {
  if (mode == "decode") {
    auto bytes = ffsim::coap::from_hex(read_input(input));
    ffsim::coap::Message m = ffsim::coap::decode_message(bytes);
    std::cout << message_to_json(m).dump(2) << "\n";
    return 0;
  }
  ordered_json j = ordered_json::parse(read_input(input));
  auto bytes = ffsim::coap::encode_message(message_from_json(j));
  std::cout << ffsim::coap::to_hex(bytes) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-agent nano-satellite debris-push mission simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", param, values, csv_path,
              filter_out, codec_mode, codec_input, server_log_path;
  std::optional<std::uint64_t> seed;
  bool no_physics = false;
  int order = 4;
  double fc = 50.0, fs = 0.0;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a mission scenario");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", out_dir, "Output directory (default: out)");
  run_cmd->add_flag("--no-physics", no_physics, "Skip debris dynamics");
  run_cmd->add_option("--server-log", server_log_path,
                      "Also export the /logging resource as JSON lines");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a scenario across parameter values");
  sweep_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep_cmd->add_option("--param", param, "Parameter to sweep")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory (default: out)");

  CLI::App* filter_cmd =
      app.add_subcommand("filter", "Low-pass filter a current trace CSV");
  filter_cmd->add_option("csv", csv_path, "Input CSV (t_ms,current_ma)")->required();
  filter_cmd->add_option("--order", order, "Filter order (default 4)");
  filter_cmd->add_option("--fc", fc, "Cutoff frequency in Hz (default 50)");
  filter_cmd->add_option("--fs", fs, "Sampling rate in Hz (default: from CSV)");
  filter_cmd->add_option("--out", filter_out, "Output CSV (default: stdout)");

  CLI::App* codec_cmd =
      app.add_subcommand("codec", "Encode/decode protocol messages");
  codec_cmd->add_option("mode", codec_mode, "decode | encode")
      ->required()
      ->check(CLI::IsMember({"decode", "encode"}));
  codec_cmd->add_option("input", codec_input,
                        "Hex string (decode) or JSON (encode); '-' for stdin")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(scenario_path, seed, out_dir, no_physics, server_log_path);
    if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, param, values, out_dir);
    if (filter_cmd->parsed())
      return cmd_filter(csv_path, order, fc, fs, filter_out);
    if (codec_cmd->parsed()) return cmd_codec(codec_mode, codec_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
