#include "lpocv/lpocv.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "lpocv/errors.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/ingest.hpp"
#include "lpocv/lpo.hpp"
#include "lpocv/moments.hpp"
#include "lpocv/penalty.hpp"
#include "lpocv/selection.hpp"
#include "lpocv/serialize.hpp"
#include "lpocv/simulation.hpp"
#include "lpocv/verify.hpp"

struct lpocv_model {
  lpocv::Model model;
};
struct lpocv_sample {
  lpocv::Sample sample;
};
struct lpocv_density {
  lpocv::DensitySpec spec;
};
struct lpocv_collection {
  lpocv::Collection collection;
};

namespace {

thread_local std::string g_last_error;

lpocv_status set_error(lpocv_status code, std::string msg) {
  g_last_error = std::move(msg);
  return code;
}

template <class F>
lpocv_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return LPOCV_OK;
  } catch (const lpocv::Error& e) {
    return set_error(static_cast<lpocv_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LPOCV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LPOCV_INTERNAL, e.what());
  } catch (...) {
    return set_error(LPOCV_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) lpocv::fail(lpocv::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  need(out, "output pointer");
  *out = dup_string(s);
}

void emit_json(char** out, const lpocv::Json& j) { emit(out, lpocv::dump_json(j) + "\n"); }

template <class T, class... Args>
void make_handle(T** out, Args&&... args) {
  need(out, "output handle");
  *out = new T{std::forward<Args>(args)...};
}

std::string csv_number(double v) {
  const std::string s = lpocv::format_number(v);
  return s == "null" ? (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")) : s;
}

}  // namespace

extern "C" {

const char* lpocv_last_error(void) { return g_last_error.c_str(); }

const char* lpocv_status_name(lpocv_status status) {
  if (status == LPOCV_OK) return "ok";
  return lpocv::error_code_name(static_cast<lpocv::ErrorCode>(status));
}

int lpocv_schema_version(void) { return lpocv::kSchemaVersion; }

void lpocv_string_free(char* s) { std::free(s); }

lpocv_status lpocv_model_from_json(const char* json, lpocv_model** out) {
  return guarded([&] {
    need(json, "json");
    make_handle(out, lpocv::model_from_json(lpocv::parse_json(json)));
  });
}

lpocv_status lpocv_model_histogram(size_t bins, lpocv_model** out) {
  return guarded([&] { make_handle(out, lpocv::Model::histogram(bins)); });
}

lpocv_status lpocv_model_trigonometric(size_t cutoff, lpocv_model** out) {
  return guarded([&] { make_handle(out, lpocv::Model::trigonometric(cutoff)); });
}

lpocv_status lpocv_model_haar_scaling(unsigned level, lpocv_model** out) {
  return guarded([&] { make_handle(out, lpocv::Model::haar_scaling(level)); });
}

lpocv_status lpocv_model_haar_wavelet(unsigned max_level, lpocv_model** out) {
  return guarded([&] { make_handle(out, lpocv::Model::haar_wavelet(max_level)); });
}

lpocv_status lpocv_model_piecewise_polynomial(unsigned depth, unsigned degree_bound, lpocv_model** out) {
  return guarded([&] { make_handle(out, lpocv::Model::piecewise_polynomial(depth, degree_bound)); });
}

lpocv_status lpocv_model_dim(const lpocv_model* model, size_t* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    *out = model->model.dim();
  });
}

lpocv_status lpocv_model_to_json(const lpocv_model* model, char** out) {
  return guarded([&] {
    need(model, "model");
    emit_json(out, lpocv::model_to_json(model->model));
  });
}

void lpocv_model_free(lpocv_model* model) { delete model; }

lpocv_status lpocv_sample_create(const double* values, size_t n, lpocv_sample** out) {
  return guarded([&] {
    if (n > 0) need(values, "values");
    make_handle(out, lpocv::Sample(std::vector<double>(values, values + n)));
  });
}

lpocv_status lpocv_sample_read(const char* path, const char* column_name, long column_index, int header,
                               lpocv_sample** out) {
  return guarded([&] {
    need(path, "path");
    lpocv::ColumnSelector sel;
    if (column_name) sel.name = column_name;
    if (column_index >= 0) sel.index = static_cast<std::size_t>(column_index);
    sel.header = header != 0;
    make_handle(out, lpocv::ingest_samples(path, sel));
  });
}

lpocv_status lpocv_sample_size(const lpocv_sample* sample, size_t* out) {
  return guarded([&] {
    need(sample, "sample");
    need(out, "output");
    *out = sample->sample.size();
  });
}

lpocv_status lpocv_sample_values(const lpocv_sample* sample, double* out, size_t capacity) {
  return guarded([&] {
    need(sample, "sample");
    need(out, "output");
    const auto v = sample->sample.values();
    if (capacity < v.size()) lpocv::fail(lpocv::ErrorCode::InvalidArgument, "output buffer too small");
    std::copy(v.begin(), v.end(), out);
  });
}

void lpocv_sample_free(lpocv_sample* sample) { delete sample; }

lpocv_status lpocv_density_from_json(const char* json, lpocv_density** out) {
  return guarded([&] {
    need(json, "json");
    make_handle(out, lpocv::density_from_json(lpocv::parse_json(json)));
  });
}

lpocv_status lpocv_density_sample(const lpocv_density* density, size_t n, uint64_t seed, lpocv_sample** out) {
  return guarded([&] {
    need(density, "density");
    make_handle(out, lpocv::sample_density(density->spec, n, seed));
  });
}

lpocv_status lpocv_density_true_risk(const lpocv_density* density, const lpocv_model* model, size_t n, double* out) {
  return guarded([&] {
    need(density, "density");
    need(model, "model");
    need(out, "output");
    *out = lpocv::true_risk(density->spec, model->model, n);
  });
}

void lpocv_density_free(lpocv_density* density) { delete density; }

lpocv_status lpocv_risk(const lpocv_model* model, const lpocv_sample* sample, size_t p, double* out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    need(out, "output");
    *out = lpocv::lpo_risk_closed(model->model, sample->sample, p).value;
  });
}

lpocv_status lpocv_risk_brute(const lpocv_model* model, const lpocv_sample* sample, size_t p, uint64_t cap,
                              double* out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    need(out, "output");
    *out = lpocv::lpo_risk_brute(model->model, sample->sample, p, cap).value;
  });
}

lpocv_status lpocv_risk_json(const lpocv_model* model, const lpocv_sample* sample, size_t p, int brute, uint64_t cap,
                             char** out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    const auto r = brute ? lpocv::lpo_risk_brute(model->model, sample->sample, p, cap)
                         : lpocv::lpo_risk_closed(model->model, sample->sample, p);
    lpocv::Json j = lpocv::to_json(r);
    j["model"] = lpocv::model_to_json(model->model);
    j["method"] = brute ? "brute" : "closed";
    emit_json(out, j);
  });
}

lpocv_status lpocv_estimate_json(const lpocv_model* model, const lpocv_sample* sample, char** out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    emit_json(out, lpocv::to_json(lpocv::fit_projection(model->model, sample->sample)));
  });
}

lpocv_status lpocv_density_grid_csv(const lpocv_model* model, const lpocv_sample* sample, size_t points, char** out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    if (points < 2) lpocv::fail(lpocv::ErrorCode::InvalidArgument, "grid needs at least 2 points");
    const auto est = lpocv::fit_projection(model->model, sample->sample);
    std::string csv = "x,density\n";
    for (std::size_t i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(points - 1);
      csv += csv_number(x) + "," + csv_number(est(x)) + "\n";
    }
    emit(out, csv);
  });
}

lpocv_status lpocv_collection_build(const char* kind, size_t n, double phi, unsigned degree_bound, size_t max_dim,
                                    lpocv_collection** out) {
  return guarded([&] {
    need(kind, "kind");
    lpocv::CollectionParams params;
    params.phi = phi;
    params.degree_bound = degree_bound;
    if (max_dim > 0) params.max_dim = max_dim;
    make_handle(out, lpocv::build_collection(lpocv::collection_kind_from_string(kind), n, params));
  });
}

lpocv_status lpocv_collection_from_models(const lpocv_model* const* models, size_t count, double phi,
                                          lpocv_collection** out) {
  return guarded([&] {
    if (count > 0) need(models, "models");
    std::vector<lpocv::Model> list;
    for (size_t i = 0; i < count; ++i) {
      need(models[i], "model");
      list.push_back(models[i]->model);
    }
    make_handle(out, lpocv::make_collection(std::move(list), phi));
  });
}

lpocv_status lpocv_collection_size(const lpocv_collection* collection, size_t* out) {
  return guarded([&] {
    need(collection, "collection");
    need(out, "output");
    *out = collection->collection.models.size();
  });
}

void lpocv_collection_free(lpocv_collection* collection) { delete collection; }

lpocv_status lpocv_select_json(const lpocv_collection* collection, const lpocv_sample* sample, size_t p,
                               unsigned threads, char** out) {
  return guarded([&] {
    need(collection, "collection");
    need(sample, "sample");
    const auto r = lpocv::select_model(collection->collection, sample->sample, p, threads);
    emit_json(out, lpocv::to_json(r, collection->collection));
  });
}

lpocv_status lpocv_check_json(const lpocv_collection* collection, size_t n, const lpocv_density* density, char** out) {
  return guarded([&] {
    need(collection, "collection");
    std::optional<double> rho;
    if (density) rho = density->spec.lower_bound();
    const auto r = lpocv::check_assumptions(collection->collection, n, rho);
    lpocv::Json j = lpocv::to_json(r, collection->collection, n);
    j["mode"] = density ? "simulation" : "data";
    emit_json(out, j);
  });
}

lpocv_status lpocv_auto_p(size_t n, double alpha, double beta, size_t* p, char** detail) {
  return guarded([&] {
    need(p, "output");
    const auto eps = lpocv::solve_epsilon(n);
    if (!eps) {
      lpocv::fail(lpocv::ErrorCode::Infeasible,
                  "--p auto: no epsilon satisfies the admissibility inequality at n = " + std::to_string(n));
    }
    const auto range = lpocv::admissible_p_range(n, eps->epsilon, alpha, beta);
    if (range.empty) {
      lpocv::fail(lpocv::ErrorCode::Infeasible, "--p auto: admissible p range is empty at n = " + std::to_string(n));
    }
    *p = range.midpoint();
    if (detail) emit_json(detail, {{"epsilon", lpocv::to_json(*eps)}, {"range", lpocv::to_json(range)}, {"p", *p}});
  });
}

lpocv_status lpocv_moments_json(const lpocv_model* model, const lpocv_density* density, size_t n, size_t p,
                                char** out) {
  return guarded([&] {
    need(model, "model");
    need(density, "density");
    const auto m = lpocv::density_moments(density->spec, model->model);
    lpocv::Json j = lpocv::to_json(lpocv::moment_report(m, n, p), model->model);
    j["density"] = lpocv::density_to_json(density->spec);
    j["expected_contrast_risk"] = lpocv::expected_contrast_risk(m, n);
    j["expected_lpo_penalty"] = lpocv::expected_lpo_penalty(m, n, p);
    j["expected_ideal_penalty"] = lpocv::expected_ideal_penalty(m, n);
    emit_json(out, j);
  });
}

lpocv_status lpocv_penalty_json(const lpocv_model* model, const lpocv_sample* sample, size_t p, char** out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    emit_json(out, lpocv::to_json(lpocv::lpo_penalty(model->model, sample->sample, p), model->model));
  });
}

lpocv_status lpocv_penalty_sweep_csv(const lpocv_model* model, const lpocv_sample* sample, char** out) {
  return guarded([&] {
    need(model, "model");
    need(sample, "sample");
    const std::size_t n = sample->sample.size();
    if (n < 2) lpocv::fail(lpocv::ErrorCode::InvalidP, "penalty sweep needs n >= 2");
    const auto stats = lpocv::sufficient_stats(model->model, sample->sample);
    const double empirical = lpocv::lpo_penalty(model->model, sample->sample, 1).empirical_risk;
    std::ostringstream csv;
    csv << "p,pen_p,c_over\n";
    for (std::size_t p = 1; p < n; ++p) {
      const double pen = lpocv::lpo_risk_from_stats(stats, p) - empirical;
      csv << p << ',' << csv_number(pen) << ',' << csv_number(lpocv::overpen_factor(n, p)) << '\n';
    }
    emit(out, csv.str());
  });
}

lpocv_status lpocv_simulate(const char* kind, const char* config_json, int64_t seed_override,
                            long replications_override, unsigned threads, char** json_out, char** csv_out) {
  return guarded([&] {
    need(kind, "kind");
    need(config_json, "config");
    auto config = lpocv::experiment_from_json(lpocv::parse_json(config_json));
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    if (replications_override > 0) config.replications = static_cast<std::size_t>(replications_override);
    config.threads = threads;
    const std::string k = kind;
    std::ostringstream csv;
    csv << "n,mean_risk,oracle_risk,ratio\n";
    lpocv::Json j;
    if (k == "oracle-ratio") {
      const auto r = lpocv::oracle_ratio_experiment(config);
      j = lpocv::to_json(r, config);
      for (const auto& row : r.rows) {
        csv << row.n << ',' << csv_number(row.mean_risk) << ',' << csv_number(row.oracle_risk) << ','
            << csv_number(row.ratio) << '\n';
      }
    } else if (k == "adaptivity") {
      const auto r = lpocv::adaptivity_slope_experiment(config);
      j = lpocv::to_json(r, config);
      for (const auto& row : r.rows) {
        const double ratio = row.oracle_risk > 0.0 ? row.mean_risk / row.oracle_risk : 0.0;
        csv << row.n << ',' << csv_number(row.mean_risk) << ',' << csv_number(row.oracle_risk) << ','
            << csv_number(ratio) << '\n';
      }
    } else {
      lpocv::fail(lpocv::ErrorCode::InvalidArgument, "unknown experiment '" + k + "' (oracle-ratio or adaptivity)");
    }
    emit_json(json_out, j);
    if (csv_out) emit(csv_out, csv.str());
  });
}

lpocv_status lpocv_verify(size_t cases, uint64_t seed, char** table_out, char** json_out, int* passed) {
  return guarded([&] {
    lpocv::VerifyOptions opt;
    opt.cases = cases;
    opt.seed = seed;
    const auto r = lpocv::run_verification(opt);
    std::ostringstream table;
    char line[200];
    std::snprintf(line, sizeof line, "%-22s %6s %7s %9s %12s  %s\n", "family", "cases", "checks", "failures",
                  "max_rel_err", "result");
    table << line;
    lpocv::Json fams = lpocv::Json::array();
    for (const auto& f : r.families) {
      std::snprintf(line, sizeof line, "%-22s %6zu %7zu %9zu %12.3e  %s\n", f.family.c_str(), f.cases, f.checks,
                    f.failures, f.max_rel_error, f.failures == 0 && f.checks > 0 ? "PASS" : "FAIL");
      table << line;
      fams.push_back({{"family", f.family}, {"cases", f.cases}, {"checks", f.checks}, {"failures", f.failures},
                      {"max_rel_error", f.max_rel_error}});
    }
    std::snprintf(line, sizeof line, "%-22s %6zu %7zu %9zu %12.3e  %s\n", "all", r.cases, r.checks, r.failures.size(),
                  r.max_rel_error, r.pass() ? "PASS" : "FAIL");
    table << line;
    lpocv::Json fails = lpocv::Json::array();
    for (const auto& c : r.failures) {
      fails.push_back({{"kind", c.kind}, {"model", c.model}, {"n", c.n}, {"p", c.p}, {"reference", c.reference},
                       {"value", c.value}, {"rel_error", c.rel_error}});
    }
    if (table_out) emit(table_out, table.str());
    if (json_out) {
      emit_json(json_out, {{"schema_version", lpocv::kSchemaVersion}, {"cases", r.cases}, {"checks", r.checks},
                           {"max_rel_error", r.max_rel_error}, {"passed", r.pass()}, {"families", fams},
                           {"failures", fails}, {"seed", seed}});
    }
    if (passed) *passed = r.pass() ? 1 : 0;
  });
}

}  // extern "C"
