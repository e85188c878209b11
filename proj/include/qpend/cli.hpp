#pragma once

// Command-line surface.  Exit codes: 0 success, 1 usage error,
// 2 computational failure, 3 verification failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qpend/verify.hpp"

namespace qpend::cli {

struct RunConfig {
  TopConfig top;
  TopKind kind = TopKind::trig;
  HalfInt jmax{-1};   // <0: use default
  int n_basis = 20;
  int levels = 10;
  std::vector<double> eta_values;
  int n_max = 3;
  std::string out;
  std::string format = "csv";
  bool negate_hyper = false;
  int threads = 0;
};

// "min:max:step" or a comma-separated explicit list.
inline std::vector<double> parse_eta_range(const std::string& text) {
  std::vector<double> out;
  auto parse_num = [](const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw domain_error("malformed number: " + s);
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    // minus signs are legal inside the fields, split on ':' only
    for (std::size_t p = text.find(':'); ; p = text.find(':', start)) {
      parts.push_back(text.substr(start, p - start));
      if (p == std::string::npos) break;
      start = p + 1;
    }
    if (parts.size() != 3)
      throw domain_error("eta range must be min:max:step");
    double lo = parse_num(parts[0]), hi = parse_num(parts[1]),
           step = parse_num(parts[2]);
    if (!(step > 0.0)) throw domain_error("eta step must be positive");
    if (hi < lo) throw domain_error("eta range must have max >= min");
    long count = std::lround((hi - lo) / step);
    for (long k = 0; k <= count; ++k) {
      double v = lo + k * step;
      if (v > hi + step * 1e-9) break;
      out.push_back(v);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t p = text.find(',', start);
    out.push_back(parse_num(text.substr(start, p - start)));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  if (!std::is_sorted(out.begin(), out.end()))
    throw domain_error("eta list must be sorted ascending");
  return out;
}

namespace detail {

inline void emit(const io::CsvTable& table, const io::json& records,
                 const RunConfig& rc, std::ostream& os) {
  if (rc.format == "json") {
    std::string text = records.dump(2) + "\n";
    if (rc.out.empty()) os << text;
    else io::write_text(rc.out, text);
  } else {
    if (rc.out.empty()) os << table.to_string();
    else table.write(rc.out);
  }
}

inline io::json scan_records(const SpectrumScan& scan,
                             const RunConfig& rc) {
  io::json arr = io::json::array();
  for (std::size_t r = 0; r < scan.eta_grid.size(); ++r) {
    io::json rec{{"eta", scan.eta_grid[r]},
                 {"converged", static_cast<bool>(scan.converged[r])}};
    for (std::size_t l = 0; l < scan.curves[r].size(); ++l) {
      double v = scan.curves[r][l];
      if (rc.negate_hyper && scan.kind == TopKind::hyper) v = -v;
      rec["level_" + std::to_string(l)] = v;
    }
    if (!scan.row_errors[r].empty()) rec["error"] = scan.row_errors[r];
    arr.push_back(std::move(rec));
  }
  return arr;
}

inline io::CsvTable scan_table(const SpectrumScan& scan,
                               const RunConfig& rc) {
  io::CsvTable t;
  t.header = {"eta"};
  std::size_t width = scan.curves.empty() ? rc.levels : scan.curves[0].size();
  for (std::size_t l = 0; l < width; ++l)
    t.header.push_back("level_" + std::to_string(l));
  t.header.push_back("converged");
  t.header.push_back("error");
  for (std::size_t r = 0; r < scan.eta_grid.size(); ++r) {
    std::vector<std::string> row{io::cell(scan.eta_grid[r])};
    for (double v : scan.curves[r]) {
      if (rc.negate_hyper && scan.kind == TopKind::hyper) v = -v;
      row.push_back(io::cell(v));
    }
    row.push_back(io::cell(static_cast<bool>(scan.converged[r])));
    row.push_back(scan.row_errors[r]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct HalfIntOpt {
  std::string text = "0";
  HalfInt get() const { return parse_half_int(text); }
};

// Flat "key = value" config files: every key maps to the flag --key and is
// appended only when that flag was not given explicitly, so flags win.
// '#' starts a comment; blank lines are skipped.
inline std::vector<std::string> merge_config_files(
    const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> paths;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size())
        throw domain_error("--config needs a file path");
      paths.push_back(args[++k]);
    } else if (args[k].rfind("--config=", 0) == 0) {
      paths.push_back(args[k].substr(9));
    } else {
      out.push_back(args[k]);
    }
  }
  auto given = [&](const std::string& key) {
    std::string f = "--" + key;
    for (const auto& a : out)
      if (a == f || a.rfind(f + "=", 0) == 0) return true;
    return false;
  };
  auto trim = [](const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  for (const auto& p : paths) {
    std::istringstream is(io::read_text(p));
    std::string line;
    std::map<std::string, std::string> kv;  // later lines overwrite earlier
    while (std::getline(is, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
        val = val.substr(1, val.size() - 2);
      if (key.empty())
        throw domain_error("config file " + p + ": line without a key");
      kv[key] = val;
    }
    for (const auto& [key, val] : kv)
      if (!given(key)) out.push_back("--" + key + "=" + val);
  }
  return out;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args,
               std::ostream& os = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Spectra of the trigonometric and hyperbolic symmetric-top "
               "pendulum: numerical scans, quasi-solvable points, algebraic "
               "levels, normalizability, and cross-checks"};
  app.require_subcommand(1);

  RunConfig rc;
  detail::HalfIntOpt kopt, mopt;
  std::string kind_text = "trig";
  std::string eta_text;
  std::string sector_text = "1+";
  int fig_id = 2;
  int qs_n = 0;
  bool have_eta_flag = false;
  double eta_flag = 0.0;

  std::string config_doc;  // consumed before parse; listed for --help only
  auto add_top = [&](CLI::App* sub, bool with_kind = true) {
    sub->add_option("--config", config_doc, "key = value config file; flags win");
    sub->add_option("--K", kopt.text, "K quantum number (integer or n/2)");
    sub->add_option("--M", mopt.text, "M quantum number (integer or n/2)");
    sub->add_option("--B", rc.top.B, "rotational constant")->capture_default_str();
    sub->add_option("--rho", rc.top.rho, "asymmetry (1/C - 1/B scaled)")->capture_default_str();
    sub->add_option("--zeta", rc.top.zeta, "cos^2 field strength")->capture_default_str();
    if (with_kind)
      sub->add_option("--kind", kind_text, "trig|hyper")
          ->check(CLI::IsMember({"trig", "hyper"}))
          ->capture_default_str();
    sub->add_option("--threads", rc.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", rc.out, "output file (default stdout)");
    sub->add_option("--format", rc.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "numerical eigenvalue scan over a field range");
  add_top(spectrum);
  spectrum->add_option("--eta", eta_text, "min:max:step or comma list")
      ->required();
  spectrum->add_option("--jmax", rc.jmax.twice,
                       "basis cutoff J (trig), doubled internally");
  spectrum->add_option("--nbasis", rc.n_basis, "Galerkin basis size (hyper)");
  spectrum->add_option("--levels", rc.levels, "eigenvalues per field point");
  spectrum->add_flag("--negate", rc.negate_hyper,
                     "report hyperbolic eigenvalues negated (as -E_h)");

  CLI::App* qs = app.add_subcommand(
      "qs", "quasi-solvable field strengths (eta, kappa) per sector");
  qs->require_subcommand(1);
  CLI::App* qs_list = qs->add_subcommand("list", "tabulate all sectors");
  add_top(qs_list, false);
  qs_list->add_option("--nmax", rc.n_max, "largest polynomial degree");

  CLI::App* algebraic = app.add_subcommand(
      "algebraic", "closed-form levels of one sector at its QS point");
  add_top(algebraic);
  algebraic->add_option("--sector", sector_text, "sector, e.g. 1+ or 3-");
  algebraic->add_option("--n", qs_n, "polynomial degree");
  algebraic->add_option("--eta", eta_flag,
                        "field strength (must equal the QS value)")
      ->each([&](const std::string&) { have_eta_flag = true; });

  CLI::App* classify = app.add_subcommand(
      "classify", "endpoint classification and normalizability by sector");
  add_top(classify);

  CLI::App* count = app.add_subcommand(
      "count", "closed-form solution count: formula and enumeration");
  add_top(count);
  count->add_option("--nmax", rc.n_max, "largest polynomial degree");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the invariant suites, JSON report");
  verify->allow_extras();
  add_top(verify, false);
  verify->add_option("--nmax", rc.n_max, "residual check depth");

  CLI::App* figure = app.add_subcommand(
      "figure", "export spectrum/marker/extrema datasets for one figure");
  figure->add_option("--config", config_doc, "key = value config file; flags win");
  figure->add_option("id", fig_id, "figure id: 2, 3, 4 or 5")->required();
  figure->add_option("--out", rc.out, "output directory")->required();
  figure->add_option("--levels", rc.levels, "curve levels");
  figure->add_option("--threads", rc.threads, "worker threads");

  // defaults chosen to match the common study point
  rc.top.zeta = 25.0;

  std::vector<std::string> merged;
  try {
    merged = detail::merge_config_files(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    std::vector<std::string> rev(merged.rbegin(), merged.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, os, err);
    return code == 0 ? 0 : 1;
  }

  try {
    rc.top.K = kopt.get();
    rc.top.M = mopt.get();
    rc.kind = kind_text == "hyper" ? TopKind::hyper : TopKind::trig;
    if (rc.threads == 0) rc.threads = default_threads();
    rc.top.validate();

    if (spectrum->parsed()) {
      rc.eta_values = parse_eta_range(eta_text);
      SpectrumScan scan;
      if (rc.kind == TopKind::trig) {
        HalfInt jmax = rc.jmax.twice < 0 ? default_trig_jmax(rc.top.K, rc.top.M)
                                         : HalfInt{rc.jmax.twice * 2};
        scan = scan_eta(rc.top, rc.eta_values, jmax, rc.levels, rc.threads);
      } else {
        scan = scan_eta_hyper(rc.top, rc.eta_values, rc.n_basis, rc.levels,
                              rc.threads);
      }
      detail::emit(detail::scan_table(scan, rc), detail::scan_records(scan, rc),
                   rc, os);
      for (const auto& e : scan.row_errors)
        if (!e.empty()) return 2;
      return 0;
    }

    if (qs_list->parsed()) {
      io::CsvTable t;
      t.header = {"sector", "n", "kappa", "eta"};
      io::json arr = io::json::array();
      for (const Sector& s : all_sectors())
        for (int n = 0; n <= rc.n_max; ++n) {
          double eta = qs_eta(s, n, rc.top.B, rc.top.zeta, rc.top.K, rc.top.M);
          int kap = qs_kappa_int(s, n, rc.top.K, rc.top.M);
          t.rows.push_back({to_string(s), io::cell(n), io::cell(kap),
                            io::cell(eta)});
          arr.push_back({{"sector", to_string(s)},
                         {"n", n},
                         {"kappa", kap},
                         {"eta", eta}});
        }
      detail::emit(t, arr, rc, os);
      return 0;
    }

    if (algebraic->parsed()) {
      Sector s = parse_sector(sector_text);
      double eta = qs_eta(s, qs_n, rc.top.B, rc.top.zeta, rc.top.K, rc.top.M);
      if (have_eta_flag) eta = eta_flag;
      TopConfig cq = rc.top.with_eta(eta);
      auto levels = algebraic_levels(s, cq, qs_n, rc.kind);
      io::CsvTable t;
      t.header = {"sector", "n", "i", "kind", "eta", "energy"};
      for (int kcoef = 0; kcoef <= qs_n; ++kcoef)
        t.header.push_back("c" + std::to_string(kcoef));
      io::json arr = io::json::array();
      for (const auto& lv : levels) {
        std::vector<std::string> row{to_string(lv.sector), io::cell(lv.n),
                                     io::cell(lv.i), to_string(lv.kind),
                                     io::cell(eta), io::cell(lv.energy)};
        for (double cc : lv.poly_coeffs) row.push_back(io::cell(cc));
        t.rows.push_back(std::move(row));
        arr.push_back({{"sector", to_string(lv.sector)},
                       {"n", lv.n},
                       {"i", lv.i},
                       {"kind", to_string(lv.kind)},
                       {"eta", eta},
                       {"energy", lv.energy},
                       {"coeffs", lv.poly_coeffs}});
      }
      detail::emit(t, arr, rc, os);
      return 0;
    }

    if (classify->parsed()) {
      EndpointClass ec = endpoint_classification(rc.top.K, rc.top.M, rc.kind);
      io::CsvTable t;
      t.header = {"sector",      "at_zero",   "at_pi_or_infinity",
                  "power_zero",  "power_pi",  "normalizable"};
      io::json arr = io::json::array();
      for (const Sector& s : all_sectors()) {
        auto ie = integrability_exponents(s, rc.top.K, rc.top.M, rc.kind);
        bool ok = normalizable(s, rc.top.K, rc.top.M, rc.kind);
        t.rows.push_back({to_string(s), to_string(ec.at_zero),
                          to_string(ec.at_pi_or_infinity),
                          io::cell(ie.at_zero), io::cell(ie.at_pi),
                          io::cell(ok)});
        arr.push_back({{"sector", to_string(s)},
                       {"at_zero", to_string(ec.at_zero)},
                       {"at_pi_or_infinity", to_string(ec.at_pi_or_infinity)},
                       {"power_zero", ie.at_zero},
                       {"power_pi", ie.at_pi},
                       {"normalizable", ok}});
      }
      detail::emit(t, arr, rc, os);
      return 0;
    }

    if (count->parsed()) {
      int formula = count_solutions(rc.n_max, rc.top.K, rc.top.M, rc.kind);
      int enumerated =
          count_distinct_levels(rc.n_max, rc.top, rc.kind);
      io::CsvTable t;
      t.header = {"kind", "nmax", "K", "M", "formula", "enumerated"};
      t.rows.push_back({to_string(rc.kind), io::cell(rc.n_max),
                        to_string(rc.top.K), to_string(rc.top.M),
                        io::cell(formula), io::cell(enumerated)});
      io::json arr = io::json::array();
      arr.push_back({{"kind", to_string(rc.kind)},
                     {"nmax", rc.n_max},
                     {"K", to_string(rc.top.K)},
                     {"M", to_string(rc.top.M)},
                     {"formula", formula},
                     {"enumerated", enumerated}});
      detail::emit(t, arr, rc, os);
      return formula == enumerated ? 0 : 3;
    }

    if (verify->parsed()) {
      auto extras = verify->remaining();
      if (!(extras.empty() ||
            (extras.size() == 1 && extras.front() == "all"))) {
        err << "usage: verify all [--K --M --zeta --rho --B]\n";
        return 1;
      }
      VerifyAllReport rep = verify_all(rc.top, std::min(rc.n_max, 3));
      std::string text = rep.to_json().dump(2) + "\n";
      if (rc.out.empty()) os << text;
      else io::write_text(rc.out, text);
      return rep.all_pass ? 0 : 3;
    }

    if (figure->parsed()) {
      std::filesystem::create_directories(rc.out);
      reproduce_figure(fig_id, rc.out, rc.levels, rc.threads);
      return 0;
    }

    err << "no subcommand\n";
    return 1;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const computational_error& e) {
    err << "computation failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args);
}

}  // namespace qpend::cli
