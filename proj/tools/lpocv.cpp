// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "lpocv/lpocv.h"

namespace {

struct CliError {
  int status;
  std::string message;
};

void check(lpocv_status st) {
  if (st != LPOCV_OK) throw CliError{st, lpocv_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{LPOCV_INVALID_ARGUMENT, msg}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  lpocv_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{LPOCV_IO_ERROR, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes next to the destination and renames, so a failure never leaves a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  std::string tmpl = path + ".tmp.XXXXXX";
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) throw CliError{LPOCV_IO_ERROR, "cannot create temporary file for '" + path + "'"};
  std::size_t done = 0;
  while (done < content.size()) {
    const ssize_t w = ::write(fd, content.data() + done, content.size() - done);
    if (w <= 0) {
      ::close(fd);
      std::remove(tmpl.c_str());
      throw CliError{LPOCV_IO_ERROR, "write failed for '" + path + "'"};
    }
    done += static_cast<std::size_t>(w);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0 || std::rename(tmpl.c_str(), path.c_str()) != 0) {
    std::remove(tmpl.c_str());
    throw CliError{LPOCV_IO_ERROR, "cannot finalise '" + path + "'"};
  }
}

void deliver(const std::string& output, const std::string& content) {
  if (output.empty() || output == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_atomic(output, content);
  }
}

// --model takes inline JSON or @path.
struct ModelHandle {
  lpocv_model* h = nullptr;
  explicit ModelHandle(const std::string& spec) {
    const std::string json = !spec.empty() && spec[0] == '@' ? slurp(spec.substr(1)) : spec;
    check(lpocv_model_from_json(json.c_str(), &h));
  }
  ~ModelHandle() { lpocv_model_free(h); }
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
};

struct SampleHandle {
  lpocv_sample* h = nullptr;
  SampleHandle(const std::string& path, const std::string& column, long column_index, bool header) {
    check(lpocv_sample_read(path.c_str(), column.empty() ? nullptr : column.c_str(), column_index, header ? 1 : 0, &h));
  }
  ~SampleHandle() { lpocv_sample_free(h); }
  std::size_t size() const {
    std::size_t n = 0;
    check(lpocv_sample_size(h, &n));
    return n;
  }
  SampleHandle(const SampleHandle&) = delete;
  SampleHandle& operator=(const SampleHandle&) = delete;
};

struct DensityHandle {
  lpocv_density* h = nullptr;
  explicit DensityHandle(const std::string& path) {
    const std::string json = slurp(path);
    check(lpocv_density_from_json(json.c_str(), &h));
  }
  ~DensityHandle() { lpocv_density_free(h); }
  DensityHandle(const DensityHandle&) = delete;
  DensityHandle& operator=(const DensityHandle&) = delete;
};

struct CollectionHandle {
  lpocv_collection* h = nullptr;
  CollectionHandle(const std::string& kind, std::size_t n, double phi, unsigned r, std::size_t max_dim) {
    check(lpocv_collection_build(kind.c_str(), n, phi, r, max_dim, &h));
  }
  ~CollectionHandle() { lpocv_collection_free(h); }
  CollectionHandle(const CollectionHandle&) = delete;
  CollectionHandle& operator=(const CollectionHandle&) = delete;
};

struct InputOpts {
  std::string path;
  std::string column;
  long column_index = -1;
  bool header = false;
};

void add_input(CLI::App* app, InputOpts& in, bool required = true) {
  auto* opt = app->add_option("-i,--input", in.path, "observations: one value per line, or CSV with --column");
  if (required) opt->required();
  app->add_option("--column", in.column, "CSV column name (first line is a header)");
  app->add_option("--column-index", in.column_index, "CSV column position, 0-based");
  app->add_flag("--header", in.header, "skip a header line when selecting by --column-index");
}

std::size_t parse_p(const std::string& text, std::size_t n) {
  if (text == "auto") {
    std::size_t p = 0;
    check(lpocv_auto_p(n, 0.01, 0.01, &p, nullptr));
    return p;
  }
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || text[0] == '-') usage_error("--p must be a positive integer or 'auto'");
  return static_cast<std::size_t>(v);
}

void print_error(int status, const std::string& message) {
  nlohmann::json err = {{"error",
                         {{"code", status},
                          {"name", lpocv_status_name(static_cast<lpocv_status>(status))},
                          {"message", message}}},
                        {"schema_version", lpocv_schema_version()}};
  std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form leave-p-out cross-validation for projection density estimators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lpocv 1.0.0");

  unsigned threads = 0;
  std::string output;
  app.add_option("--threads", threads, "worker threads (default: LPOCV_THREADS or all cores)");
  app.add_option("-o,--output", output, "write the result here (atomically) instead of stdout");

  // risk
  auto* risk = app.add_subcommand("risk", "leave-p-out risk of one model");
  std::string model_spec, p_text;
  InputOpts risk_in;
  bool brute = false;
  std::uint64_t cap = 1'000'000;
  risk->add_option("-m,--model", model_spec, "model descriptor JSON, or @file")->required();
  add_input(risk, risk_in);
  risk->add_option("-p,--p", p_text, "test-set size p, or 'auto'")->required();
  risk->add_flag("--brute", brute, "enumerate all C(n,p) splits instead of the closed form");
  risk->add_option("--cap", cap, "maximum number of splits for --brute");

  // select
  auto* select = app.add_subcommand("select", "choose a model by minimising the leave-p-out risk");
  std::string kind = "pc";
  double phi = 1.0;
  unsigned degree = 1;
  std::size_t max_dim = 0;
  InputOpts sel_in;
  select->add_option("-c,--collection", kind, "pc, pp or tp")->check(CLI::IsMember({"pc", "pp", "tp"}));
  select->add_option("--phi", phi, "Phi in the dimension bound Phi n/(log n)^2");
  select->add_option("-r,--degree-bound", degree, "r for piecewise polynomials");
  select->add_option("--max-dim", max_dim, "cap the largest dimension");
  add_input(select, sel_in);
  select->add_option("-p,--p", p_text, "test-set size p, or 'auto'")->required();

  // check
  auto* chk = app.add_subcommand("check", "assumption report for a collection");
  InputOpts chk_in;
  std::size_t chk_n = 0;
  std::string density_path;
  chk->add_option("-c,--collection", kind, "pc, pp or tp")->check(CLI::IsMember({"pc", "pp", "tp"}));
  chk->add_option("--phi", phi, "Phi in the dimension bound");
  chk->add_option("-r,--degree-bound", degree, "r for piecewise polynomials");
  chk->add_option("--max-dim", max_dim, "cap the largest dimension");
  chk->add_option("-n,--n", chk_n, "sample size (or give --input)");
  add_input(chk, chk_in, false);
  chk->add_option("--density", density_path, "known density JSON (simulation mode, enables the (Ad) check)");

  // moments
  auto* mom = app.add_subcommand("moments", "exact mean, variance and bias of the leave-p-out risk");
  std::size_t mom_n = 0, mom_p = 0;
  mom->add_option("-m,--model", model_spec, "model descriptor JSON, or @file")->required();
  mom->add_option("--density", density_path, "density JSON file")->required();
  mom->add_option("-n,--n", mom_n, "sample size")->required();
  mom->add_option("-p,--p", mom_p, "test-set size")->required();

  // penalty-sweep
  auto* sweep = app.add_subcommand("penalty-sweep", "CSV of pen_p and C_over for p = 1..n-1");
  InputOpts sweep_in;
  sweep->add_option("-m,--model", model_spec, "model descriptor JSON, or @file")->required();
  add_input(sweep, sweep_in);

  // density-grid
  auto* grid = app.add_subcommand("density-grid", "CSV of the fitted density on a uniform grid");
  InputOpts grid_in;
  std::size_t points = 101;
  grid->add_option("-m,--model", model_spec, "model descriptor JSON, or @file")->required();
  add_input(grid, grid_in);
  grid->add_option("--points", points, "grid points on [0,1]");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->require_subcommand(1);
  std::string config_path, csv_path;
  std::int64_t seed = -1;
  long reps = -1;
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment JSON file")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--reps", reps, "override the replication count");
    sub->add_option("--csv", csv_path, "also write CSV rows (n, mean risk, oracle risk, ratio)");
  };
  auto* sim_ratio = sim->add_subcommand("oracle-ratio", "selected risk over the best true risk");
  auto* sim_slope = sim->add_subcommand("adaptivity", "log-log slope of the selected risk against n");
  add_sim(sim_ratio);
  add_sim(sim_slope);

  // verify
  auto* ver = app.add_subcommand("verify", "closed form against exhaustive resampling");
  std::size_t cases = 500;
  std::uint64_t vseed = 0;
  ver->add_option("--cases", cases, "random cases");
  ver->add_option("--seed", vseed, "case generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(LPOCV_INVALID_ARGUMENT, e.what());
    return LPOCV_INVALID_ARGUMENT;
  }

  try {
    if (*risk) {
      ModelHandle m(model_spec);
      SampleHandle s(risk_in.path, risk_in.column, risk_in.column_index, risk_in.header);
      const std::size_t p = parse_p(p_text, s.size());
      char* out = nullptr;
      check(lpocv_risk_json(m.h, s.h, p, brute ? 1 : 0, cap, &out));
      deliver(output, take(out));
    } else if (*select) {
      SampleHandle s(sel_in.path, sel_in.column, sel_in.column_index, sel_in.header);
      const std::size_t p = parse_p(p_text, s.size());
      CollectionHandle c(kind, s.size(), phi, degree, max_dim);
      char* out = nullptr;
      check(lpocv_select_json(c.h, s.h, p, threads, &out));
      deliver(output, take(out));
    } else if (*chk) {
      std::size_t n = chk_n;
      if (!chk_in.path.empty()) {
        SampleHandle s(chk_in.path, chk_in.column, chk_in.column_index, chk_in.header);
        n = s.size();
      }
      if (n == 0) usage_error("check needs --n or --input");
      CollectionHandle c(kind, n, phi, degree, max_dim);
      char* out = nullptr;
      if (!density_path.empty()) {
        DensityHandle d(density_path);
        check(lpocv_check_json(c.h, n, d.h, &out));
      } else {
        check(lpocv_check_json(c.h, n, nullptr, &out));
      }
      deliver(output, take(out));
    } else if (*mom) {
      ModelHandle m(model_spec);
      DensityHandle d(density_path);
      char* out = nullptr;
      check(lpocv_moments_json(m.h, d.h, mom_n, mom_p, &out));
      deliver(output, take(out));
    } else if (*sweep) {
      ModelHandle m(model_spec);
      SampleHandle s(sweep_in.path, sweep_in.column, sweep_in.column_index, sweep_in.header);
      char* out = nullptr;
      check(lpocv_penalty_sweep_csv(m.h, s.h, &out));
      deliver(output, take(out));
    } else if (*grid) {
      ModelHandle m(model_spec);
      SampleHandle s(grid_in.path, grid_in.column, grid_in.column_index, grid_in.header);
      char* out = nullptr;
      check(lpocv_density_grid_csv(m.h, s.h, points, &out));
      deliver(output, take(out));
    } else if (*sim) {
      const std::string config = slurp(config_path);
      const char* which = *sim_ratio ? "oracle-ratio" : "adaptivity";
      char* json = nullptr;
      char* csv = nullptr;
      check(lpocv_simulate(which, config.c_str(), seed, reps, threads, &json, csv_path.empty() ? nullptr : &csv));
      const std::string csv_text = take(csv);
      if (!csv_path.empty()) write_atomic(csv_path, csv_text);
      deliver(output, take(json));
    } else if (*ver) {
      char* table = nullptr;
      char* json = nullptr;
      int passed = 0;
      check(lpocv_verify(cases, vseed, &table, &json, &passed));
      std::cout << take(table);
      const std::string report = take(json);
      if (!output.empty()) write_atomic(output, report);
      return passed ? 0 : 1;
    }
  } catch (const CliError& e) {
    print_error(e.status, e.message);
    return e.status;
  } catch (const std::exception& e) {
    print_error(LPOCV_INTERNAL, e.what());
    return LPOCV_INTERNAL;
  }
  return 0;
}
