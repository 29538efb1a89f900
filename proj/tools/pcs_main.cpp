#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcs/advection.hpp"
#include "pcs/csvio.hpp"
#include "pcs/error.hpp"
#include "pcs/lab.hpp"
#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"
#include "pcs/spectral.hpp"

namespace {

namespace fs = std::filesystem;
using pcs::io::format_double;

int exit_code_for(pcs::errc code) {
  switch (code) {
    case pcs::errc::invalid_argument:
    case pcs::errc::io: return 2;
    case pcs::errc::benchmark_invalid: return 4;
    default: return 3; // numerical: singular, factorization, divergence, post-shock
  }
}

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PCS_OUT_DIR"); env && *env) return env;
  return ".";
}

std::pair<int, int> split_for_order(int order) {
  if (order < 4 || order > 16 || order % 2 != 0)
    throw pcs::error(pcs::errc::invalid_argument, "--order must be even and within 4..16");
  static constexpr std::pair<int, int> table[] = {{1, 1}, {1, 2}, {2, 2}, {2, 3},
                                                  {3, 3}, {3, 4}, {4, 4}};
  return table[(order - 4) / 2];
}

pcs::case_config resolve_case(const std::string& name, bool paper_scale) {
  if (name == "linear_pulse" || name == "linear")
    return pcs::linear_pulse_case(paper_scale ? 200.0 : 50.0);
  if (name == "burgers_wave" || name == "burgers") return pcs::burgers_wave_case();
  throw pcs::error(pcs::errc::invalid_argument,
                   "unknown case '" + name + "' (expected linear_pulse or burgers_wave)");
}

pcs::classical_scheme classical_for_label(const std::string& label) {
  const std::string base = (!label.empty() && label[0] == 'P') ? label.substr(1) : label;
  if (!pcs::is_builtin(base))
    throw pcs::error(pcs::errc::invalid_argument, "unknown scheme label: " + label);
  return pcs::builtin_scheme(base);
}

pcs::integrator integrator_for(const std::string& label, const std::string& requested) {
  const bool prefactored_label = !label.empty() && label[0] == 'P';
  std::string kind = requested;
  if (kind == "auto") kind = prefactored_label ? "maccormack" : "tvd-rk2";
  if (kind == "maccormack") {
    if (!prefactored_label)
      throw pcs::error(pcs::errc::invalid_argument,
                       "MacCormack needs a prefactored scheme label (PC...)");
    return pcs::integrator::maccormack(pcs::prefactor(classical_for_label(label)));
  }
  if (kind == "tvd-rk2") {
    if (prefactored_label)
      throw pcs::error(pcs::errc::invalid_argument,
                       "TVD-RK2 needs a classical scheme label (C...)");
    return pcs::integrator::tvd_rk2(classical_for_label(label));
  }
  throw pcs::error(pcs::errc::invalid_argument, "unknown integrator: " + requested);
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : csv) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void print_scheme(std::ostream& os, const pcs::moment_solve_report& rep,
                  const pcs::prefactored_scheme& p) {
  const auto& s = rep.scheme;
  os << "scheme " << s.label << "  order " << s.order << "  nc " << s.nc() << "  ne " << s.ne()
     << "\n  moment-system condition (one-norm): " << format_double(rep.condition, 4) << "\n";
  os << "  " << pcs::format_scheme_line(s) << "\n";
  os << "  prefactored " << p.label << "  beta~0 " << format_double(p.center()) << "\n    beta:";
  for (double v : p.beta) os << ' ' << format_double(v);
  os << "\n    b:   ";
  for (double v : p.b) os << ' ' << format_double(v);
  os << "\n";
  for (const auto& w : p.warnings) os << "  warning: " << w << "\n";
}

void write_and_note(const fs::path& path, const std::string& content) {
  pcs::io::write_file_atomic(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

int cmd_derive(int order, const std::string& scheme_file, const std::string& emit,
               const fs::path& out_dir) {
  std::vector<pcs::moment_solve_report> reports;
  if (!scheme_file.empty()) {
    const std::string text = pcs::io::read_file(scheme_file);
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = std::min(text.find('\n', pos), text.size());
      const std::string line = text.substr(pos, eol - pos);
      pos = eol + 1;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const pcs::classical_scheme s = pcs::parse_scheme_line(line);
      reports.push_back({s, 0.0});
    }
    if (reports.empty())
      throw pcs::error(pcs::errc::invalid_argument, "scheme file holds no schemes");
  } else {
    const auto [nc, ne] = split_for_order(order);
    reports.push_back(pcs::derive_classical_report(nc, ne));
  }
  std::string emitted;
  for (const auto& rep : reports) {
    const pcs::classical_scheme& s = rep.scheme;
    const pcs::prefactored_scheme p = pcs::prefactor(s);
    print_scheme(std::cout, rep, p);
    emitted += pcs::format_scheme_line(s) + "\n";

    write_and_note(out_dir / (s.label + "_classical.txt"), pcs::format_scheme_line(s) + "\n");

    std::string pf = "label " + p.label + "\nsource " + p.source_label + "\norder " +
                     std::to_string(p.order) + "\nbeta~0 = " + format_double(p.center()) + "\n";
    for (int k = 0; k < p.nc(); ++k)
      pf += "beta_" + std::to_string(k + 1) + " = " +
            format_double(p.beta[static_cast<std::size_t>(k)]) + "\n";
    for (int k = 0; k < p.ne(); ++k)
      pf += "b_" + std::to_string(k + 1) + " = " +
            format_double(p.b[static_cast<std::size_t>(k)]) + "\n";
    for (const auto& w : p.warnings) pf += "warning: " + w + "\n";
    write_and_note(out_dir / (p.label + "_prefactored.txt"), pf);

    const pcs::factorization_report fr = pcs::verify_factorization(s, p, 64);
    const std::string res =
        "pair " + s.label + " -> " + p.label + "\nring n " + std::to_string(fr.n) +
        "\ntranspose_implicit = " + format_double(fr.transpose_implicit) +
        "\ntranspose_explicit = " + format_double(fr.transpose_explicit) +
        "\noperator_residual = " + format_double(fr.operator_residual) + "\n";
    write_and_note(out_dir / (p.label + "_residual.txt"), res);
    std::cout << "  ring-operator residual (n 64): " << format_double(fr.operator_residual, 4)
              << "\n";
  }
  if (!emit.empty()) write_and_note(emit, emitted);
  return 0;
}

int cmd_wavenumber(const std::string& schemes_csv, int samples, const fs::path& out_dir) {
  const std::vector<std::string> labels = split_labels(schemes_csv);
  if (labels.empty()) throw pcs::error(pcs::errc::invalid_argument, "--schemes is empty");
  // Classical labels sample the rational symbol; prefactored labels sample the
  // averaged sweep pair (the independent path; columns agree to roundoff).
  std::vector<pcs::classical_scheme> classicals;
  std::vector<std::optional<pcs::prefactored_scheme>> prefactoreds;
  for (const auto& label : labels) {
    classicals.push_back(classical_for_label(label));
    if (!label.empty() && label[0] == 'P')
      prefactoreds.emplace_back(pcs::prefactor(classicals.back()));
    else
      prefactoreds.emplace_back(std::nullopt);
  }

  const struct {
    pcs::curve_kind kind;
    const char* file;
  } outputs[] = {{pcs::curve_kind::wavenumber, "wavenumber.csv"},
                 {pcs::curve_kind::phase, "phase.csv"},
                 {pcs::curve_kind::group, "group.csv"}};
  for (const auto& spec : outputs) {
    std::vector<std::string> header{"z", "exact"};
    for (const auto& label : labels) header.push_back(label);
    pcs::io::csv_table table(std::move(header));
    std::vector<pcs::spectral_curve> curves;
    for (std::size_t s = 0; s < labels.size(); ++s)
      curves.push_back(prefactoreds[s] ? pcs::sample_curve(*prefactoreds[s], spec.kind, samples)
                                       : pcs::sample_curve(classicals[s], spec.kind, samples));
    for (int i = 0; i < samples; ++i) {
      const double z = curves[0].z[static_cast<std::size_t>(i)];
      std::vector<std::string> row{format_double(z),
                                   format_double(spec.kind == pcs::curve_kind::wavenumber ? z
                                                                                          : 1.0)};
      for (const auto& c : curves) row.push_back(format_double(c.value[static_cast<std::size_t>(i)]));
      table.add_row(std::move(row));
    }
    pcs::io::write_file_atomic(out_dir / spec.file, table.str());
    std::cout << "wrote " << (out_dir / spec.file).string() << "\n";
  }
  return 0;
}

void write_state_csv(const fs::path& path, const pcs::grid_function& u,
                     const pcs::grid_function* exact) {
  std::vector<std::string> header{"x", "u_numerical"};
  if (exact) header.push_back("u_exact");
  pcs::io::csv_table table(std::move(header));
  for (int j = 0; j < u.size(); ++j) {
    std::vector<std::string> row{format_double(u.grid.node(j)), format_double(u[j])};
    if (exact) row.push_back(format_double((*exact)[j]));
    table.add_row(std::move(row));
  }
  pcs::io::write_file_atomic(path, table.str());
  std::cout << "wrote " << path.string() << "\n";
}

int cmd_solve(const std::string& case_name, const std::string& scheme, int n, double dt,
              double tf, const std::vector<double>& snapshots, const std::string& integ,
              bool allow_post_shock, bool paper_scale, const fs::path& out_dir) {
  const pcs::case_config cfg = resolve_case(case_name, paper_scale);
  const pcs::integrator ti = integrator_for(scheme, integ);
  const pcs::advection_problem prob =
      pcs::make_problem(cfg, n, ti.order(), dt > 0 ? std::optional<double>(dt) : std::nullopt,
                        tf > 0 ? std::optional<double>(tf) : std::nullopt);

  const double ts = pcs::shock_time(prob);
  const bool exact_ok = prob.t_final < ts;
  if (!exact_ok && !allow_post_shock)
    throw pcs::error(pcs::errc::post_shock,
                     "t_final is past shock formation (t_s = " + format_double(ts, 6) +
                         "); pass --allow-post-shock to run without the analytic reference");
  if (!exact_ok)
    std::cout << "warning: past shock formation (t_s = " << format_double(ts, 6)
              << "); analytic reference disabled\n";
  else if (prob.kind == pcs::flavor::burgers && prob.t_final > 0.95 * ts)
    std::cout << "warning: within 5% of shock formation; analytic comparison is ill-conditioned\n";

  const std::string stem = cfg.name + "_" + scheme;
  pcs::snapshot_hook hook = [&](double t, const pcs::grid_function& u) {
    std::optional<pcs::grid_function> exact;
    if (exact_ok) exact = pcs::exact_solution(prob, t);
    write_state_csv(out_dir / (stem + "_t" + format_double(t, 6) + ".csv"), u,
                    exact ? &*exact : nullptr);
  };

  const pcs::run_result res = pcs::run(prob, ti, snapshots, hook);
  const auto& rep = res.report;
  std::cout << "integrator " << rep.integrator_label << "\n"
            << "steps " << rep.steps << "  dt " << format_double(rep.dt, 6) << "  cfl "
            << format_double(rep.cfl, 4) << "\n"
            << "wall " << format_double(rep.seconds_total, 4) << " s  (derivative kernels "
            << format_double(rep.seconds_derivative, 4) << " s)\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";

  std::optional<pcs::grid_function> exact;
  if (exact_ok) {
    exact = pcs::exact_solution(prob, prob.t_final);
    const pcs::error_norms norms = pcs::compute_norms(res.state, *exact);
    std::cout << "error vs analytic:  l1 " << format_double(norms.l1, 6) << "  l2 "
              << format_double(norms.l2, 6) << "  linf " << format_double(norms.linf, 6) << "\n";
  }
  write_state_csv(out_dir / (stem + "_final.csv"), res.state, exact ? &*exact : nullptr);
  return 0;
}

int cmd_convergence(const std::string& case_name, const std::string& scheme,
                    std::string grids_csv, double dt, const fs::path& out_dir) {
  const pcs::case_config cfg = resolve_case(case_name, false);
  if (grids_csv.empty())
    grids_csv = cfg.kind == pcs::flavor::linear ? "400,600,800,1000" : "120,140,160,180";
  std::vector<int> grids;
  for (const auto& tok : split_labels(grids_csv)) grids.push_back(std::stoi(tok));
  if (grids.size() < 2)
    throw pcs::error(pcs::errc::invalid_argument, "convergence needs at least 2 grids");

  const pcs::convergence_study_result res = pcs::convergence_study(
      cfg, scheme, grids, dt > 0 ? std::optional<double>(dt) : std::nullopt);

  pcs::io::csv_table table({"scheme", "n", "l1", "l2", "linf", "p_endpoint"});
  std::cout << "case " << res.case_name << "  scheme " << res.scheme_label << "\n";
  for (const auto& row : res.rows) {
    std::cout << "  n " << row.n << "  h " << format_double(row.h, 6);
    if (row.diverged) {
      std::cout << "  diverged\n";
    } else {
      std::cout << "  l2 " << format_double(row.norms.l2, 6) << "  p "
                << format_double(row.p_step, 5) << "\n";
    }
    table.add_row({res.scheme_label, std::to_string(row.n), format_double(row.norms.l1),
                   format_double(row.norms.l2), format_double(row.norms.linf),
                   format_double(res.p_endpoint)});
  }
  std::cout << "endpoint order " << format_double(res.p_endpoint, 6) << "\n";
  for (const auto& f : res.failures) std::cout << "failure: " << f << "\n";
  const fs::path file = out_dir / ("convergence_" + res.case_name + "_" + scheme + ".csv");
  pcs::io::write_file_atomic(file, table.str());
  std::cout << "wrote " << file.string() << "\n";
  return res.failures.empty() ? 0 : 3;
}

int cmd_bench(const std::string& pair, int n, long steps, const fs::path& out_dir) {
  const std::size_t colon = pair.find(':');
  if (colon == std::string::npos)
    throw pcs::error(pcs::errc::invalid_argument, "--pair must look like PC6:C6");
  const std::string pc_label = pair.substr(0, colon);
  const std::string c_label = pair.substr(colon + 1);
  if (pc_label.empty() || pc_label[0] != 'P')
    throw pcs::error(pcs::errc::invalid_argument, "left of ':' must be a prefactored label (PC...)");
  const pcs::prefactored_scheme pc = pcs::prefactor(classical_for_label(pc_label));
  const pcs::classical_scheme c = classical_for_label(c_label);

  const pcs::bench_report rep = pcs::benchmark_pair(pc, c, n, steps);
  std::cout << "pair " << rep.pair << "  n " << rep.n << "  steps " << rep.steps << "\n"
            << "  " << pc_label << " full " << format_double(rep.t_pc_ms, 5) << " ms  kernels "
            << format_double(rep.t_pc_kernel_ms, 5) << " ms\n"
            << "  " << c_label << " full " << format_double(rep.t_c_ms, 5) << " ms  kernels "
            << format_double(rep.t_c_kernel_ms, 5) << " ms\n"
            << "  decrease " << format_double(rep.decrease_pct, 4) << " %\n";

  pcs::io::csv_table table({"pair", "n", "steps", "t_pc_ms", "t_c_ms", "decrease_pct"});
  table.add_row({rep.pair, std::to_string(rep.n), std::to_string(rep.steps),
                 format_double(rep.t_pc_ms), format_double(rep.t_c_ms),
                 format_double(rep.decrease_pct)});
  pcs::io::write_file_atomic(out_dir / "bench.csv", table.str());
  std::cout << "wrote " << (out_dir / "bench.csv").string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"prefactored compact scheme workbench"};
  app.require_subcommand(1);
  std::string out_dir_flag;
  app.add_option("--out-dir", out_dir_flag,
                 "directory for generated files (default: $PCS_OUT_DIR or .)");

  int order = 0;
  std::string scheme_file, emit;
  auto* derive = app.add_subcommand("derive", "derive scheme weights and their prefactorization");
  auto* order_opt = derive->add_option("--order", order, "even order 4..16");
  auto* file_opt = derive->add_option("--scheme-file", scheme_file, "read schemes from a file");
  derive->add_option("--emit", emit, "also write the scheme lines to this file");
  order_opt->excludes(file_opt);

  std::string wn_schemes = "C4,C6,C8,C10";
  int samples = 256;
  auto* wavenumber = app.add_subcommand("wavenumber", "sample spectral curves to CSV");
  wavenumber->add_option("--schemes", wn_schemes, "comma-separated scheme labels");
  wavenumber->add_option("--samples", samples, "samples over (0, pi]")->check(CLI::Range(2, 100000));

  std::string s_case = "linear_pulse", s_scheme = "PC6", s_integrator = "auto";
  int s_n = 400;
  double s_dt = 0.0, s_tf = 0.0;
  std::vector<double> s_snapshots;
  bool allow_post_shock = false, paper_scale = false;
  auto* solve = app.add_subcommand("solve", "march one case and write solution CSVs");
  solve->add_option("--case", s_case, "linear_pulse or burgers_wave");
  solve->add_option("--scheme", s_scheme, "scheme label, e.g. PC6 or C6");
  solve->add_option("--n", s_n, "grid nodes")->check(CLI::PositiveNumber);
  solve->add_option("--dt", s_dt, "time step override");
  solve->add_option("--tf", s_tf, "final time override");
  solve->add_option("--snapshots", s_snapshots, "snapshot times")->delimiter(',');
  solve->add_option("--integrator", s_integrator, "auto, maccormack, or tvd-rk2")
      ->check(CLI::IsMember({"auto", "maccormack", "tvd-rk2"}));
  solve->add_flag("--allow-post-shock", allow_post_shock,
                  "march past shock formation without the analytic reference");
  solve->add_flag("--paper-scale", paper_scale, "full-length linear run (t_f = 200)");

  std::string c_case = "linear_pulse", c_scheme = "PC6", c_grids;
  double c_dt = 0.0;
  auto* convergence = app.add_subcommand("convergence", "grid refinement study");
  convergence->add_option("--case", c_case, "linear_pulse or burgers_wave");
  convergence->add_option("--scheme", c_scheme, "scheme label, e.g. PC6 or C6");
  convergence->add_option("--grids", c_grids, "comma-separated node counts");
  convergence->add_option("--dt", c_dt, "time step override applied to every grid");

  std::string b_pair = "PC6:C6";
  int b_n = 10000;
  long b_steps = 2000;
  auto* bench = app.add_subcommand("bench", "time MacCormack+PC against TVD-RK2+C");
  bench->add_option("--pair", b_pair, "labels as PC&:C&, e.g. PC6:C6");
  bench->add_option("--n", b_n, "grid nodes")->check(CLI::PositiveNumber);
  bench->add_option("--steps", b_steps, "time steps per run")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    const fs::path out_dir = resolve_out_dir(out_dir_flag);
    if (derive->parsed()) {
      if (order == 0 && scheme_file.empty())
        throw pcs::error(pcs::errc::invalid_argument, "derive needs --order or --scheme-file");
      return cmd_derive(order, scheme_file, emit, out_dir);
    }
    if (wavenumber->parsed()) return cmd_wavenumber(wn_schemes, samples, out_dir);
    if (solve->parsed())
      return cmd_solve(s_case, s_scheme, s_n, s_dt, s_tf, s_snapshots, s_integrator,
                       allow_post_shock, paper_scale, out_dir);
    if (convergence->parsed()) return cmd_convergence(c_case, c_scheme, c_grids, c_dt, out_dir);
    if (bench->parsed()) return cmd_bench(b_pair, b_n, b_steps, out_dir);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const pcs::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
