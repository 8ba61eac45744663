// hecke: command-line front end for traces, dimensions, class numbers and
// Li coefficients. Every record is one JSON object per line on stdout.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "hecke/hecke.hpp"

using json = nlohmann::ordered_json;

namespace {

// Reals go out with 15 significant digits.
double real15(double x) {
  if (!std::isfinite(x))
    return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  const double y = std::strtod(buf, nullptr);
  return y == 0.0 ? 0.0 : y; // no "-0"
}

std::string csv_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", real15(x));
  return buf;
}

void emit(const json &j) { std::cout << j.dump() << '\n'; }

struct Common {
  int weight = 12;
  std::int64_t level = 1;
  std::string chi = "trivial";
  unsigned threads = 1;
  bool no_cache = false;
};

std::unique_ptr<hecke::TraceCache> open_cache(const Common &c) {
  if (c.no_cache)
    return nullptr;
  return std::make_unique<hecke::TraceCache>(hecke::TraceCache::default_directory() / hecke::TraceCache::kFileName);
}

hecke::HeckeSpace make_space(const Common &c) {
  if (c.level < 1)
    throw hecke::DomainError("level must be positive");
  return hecke::HeckeSpace(c.weight, hecke::parse_character_spec(c.chi, c.level));
}

void add_space_options(CLI::App *cmd, Common &c, bool with_threads) {
  cmd->add_option("--weight,-k", c.weight, "weight k (> 2)")->required();
  cmd->add_option("--level,-N", c.level, "level N")->default_val(1);
  cmd->add_option("--char", c.chi, "trivial | kronecker:D | file:PATH")->default_val("trivial");
  cmd->add_flag("--no-cache", c.no_cache, "do not read or write the trace cache");
  if (with_threads)
    cmd->add_option("--threads", c.threads, "worker threads")->default_val(1)->check(CLI::Range(1u, 256u));
}

json space_json(const Common &c) { return json{{"k", c.weight}, {"N", c.level}, {"char", c.chi}}; }

json trace_json(const Common &c, std::int64_t n, const hecke::TraceValue &t, bool exact) {
  json j = space_json(c);
  j["n"] = n;
  j["trace_re"] = real15(t.approx.real());
  j["trace_im"] = real15(t.approx.imag());
  if (exact)
    j["exact"] = t.exact.serialize();
  j["snapped"] = t.snapped ? json(t.snapped->get_str()) : json(nullptr);
  j["outside_validated_range"] = t.outside_validated_range;
  return j;
}

json report_json(const Common &c, const hecke::LiReport &r) {
  json j = space_json(c);
  j["n"] = r.n;
  j["tau"] = real15(r.tau);
  j["tau_im"] = real15(r.tau_imag);
  j["level_term"] = real15(r.level_term);
  j["hadamard_correction"] = real15(r.hadamard_correction);
  j["archimedean_term"] = real15(r.archimedean_term);
  j["prime_sum"] = real15(r.prime_sum);
  j["binomial_tail"] = real15(r.binomial_tail);
  j["band"] = real15(r.oscillation_band);
  j["cutoff"] = r.cutoff;
  j["convention"] = hecke::to_string(r.convention);
  return j;
}

void write_csv(const std::string &path, const std::vector<hecke::LiReport> &rows) {
  std::ofstream out(path);
  if (!out)
    throw hecke::DataError("cannot write CSV file '" + path + "'");
  out << "n,tau,level_term,archimedean_term,prime_sum,binomial_tail,band,cutoff,convention\n";
  for (const auto &r : rows)
    out << r.n << ',' << csv_real(r.tau) << ',' << csv_real(r.level_term) << ','
        << csv_real(r.archimedean_term) << ',' << csv_real(r.prime_sum) << ','
        << csv_real(r.binomial_tail) << ',' << csv_real(r.oscillation_band) << ',' << r.cutoff << ','
        << hecke::to_string(r.convention) << '\n';
}

void emit_summary(const std::vector<hecke::LiReport> &rows, std::int64_t cutoff) {
  bool all = true;
  for (const auto &r : rows)
    all = all && r.tau >= 0.0;
  emit(json{{"summary", "all τ ≥ 0 at cutoff " + std::to_string(cutoff) + ": " + (all ? "yes" : "no")},
            {"all_nonnegative", all},
            {"cutoff", cutoff},
            {"cutoff_dependent", true}});
}

std::complex<double> parse_alpha(const std::string &s) {
  if (s == "i")
    return {0.0, 1.0};
  if (s == "-i")
    return {0.0, -1.0};
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos)
      return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception &) {
    throw hecke::DomainError("cannot parse alpha '" + s + "' (use RE, RE,IM or i)");
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hecke traces, newform dimensions and Li coefficients"};
  app.require_subcommand(1);

  Common common;

  // trace
  auto *trace = app.add_subcommand("trace", "trace of T(n) on S_k(N, chi)");
  add_space_options(trace, common, true);
  std::int64_t trace_n = 0, trace_nmax = 0;
  bool exact = false;
  auto *n_opt = trace->add_option("--n", trace_n, "Hecke index n");
  auto *nmax_opt = trace->add_option("--nmax", trace_nmax, "emit every n from 1 to NMAX");
  n_opt->excludes(nmax_opt);
  trace->add_flag("--exact", exact, "include the exact value in Q(zeta_r)");

  auto *dim = app.add_subcommand("dim", "dimension of S_k(N, chi)");
  add_space_options(dim, common, false);

  auto *nu = app.add_subcommand("nu", "newform dimensions nu_m for f | m | N");
  add_space_options(nu, common, false);

  auto *classnum = app.add_subcommand("classnum", "class number and unit count of a negative discriminant");
  std::int64_t disc = 0;
  classnum->add_option("-D,--discriminant", disc, "discriminant D < 0, D = 0,1 mod 4")->required();

  // oracle
  auto *oracle = app.add_subcommand("oracle", "independent level-one and Gamma0(N) checks");
  oracle->require_subcommand(1);
  auto *check1 = oracle->add_subcommand("check-level1", "compare traces with q-expansion linear algebra");
  int oracle_k = 12;
  std::int64_t oracle_nmax = 10, oracle_N = 1, eigen_cutoff = 10000;
  check1->add_option("--weight,-k", oracle_k)->required();
  check1->add_option("--nmax", oracle_nmax)->default_val(10);
  auto *dimg0 = oracle->add_subcommand("dim-gamma0", "compare dim S_k(Gamma0(N)) with tr T(1)");
  dimg0->add_option("--weight,-k", oracle_k)->required();
  dimg0->add_option("--level,-N", oracle_N)->required();
  auto *eigen_delta = oracle->add_subcommand("eigen-delta", "write Ramanujan tau(p) as an EIGEN v1 file");
  eigen_delta->add_option("--cutoff", eigen_cutoff)->default_val(10000);

  // euler
  auto *euler = app.add_subcommand("euler", "sums over the zeros of one Euler factor 1 - alpha p^-s");
  euler->require_subcommand(1);
  std::string alpha_text = "1";
  std::int64_t euler_p = 2, euler_n = 1, euler_K = 100000;
  auto *zero_sum = euler->add_subcommand("zero-sum", "direct sum over zeros with a tail estimate");
  auto *li_sum = euler->add_subcommand("li-sum", "prime-power series form");
  for (auto *cmd : {zero_sum, li_sum}) {
    cmd->add_option("--alpha", alpha_text, "RE, RE,IM or i")->default_val("1");
    cmd->add_option("--p", euler_p)->default_val(2);
    cmd->add_option("--n", euler_n)->default_val(1);
  }
  zero_sum->add_option("--K", euler_K, "truncation index")->default_val(100000);

  // li
  auto *li = app.add_subcommand("li", "Li coefficients tau_N(n) of S_k(N, chi)");
  add_space_options(li, common, true);
  std::int64_t li_nmax = 1, cutoff = 10000;
  std::string convention = "paper", csv_path;
  bool verbose = false;
  li->add_option("--nmax", li_nmax)->default_val(1);
  li->add_option("--cutoff", cutoff, "prime-power cutoff X")->default_val(10000);
  li->add_option("--convention", convention, "paper | hadamard-corrected")->default_val("paper");
  li->add_option("--csv", csv_path, "also write the table as CSV");
  li->add_flag("--verbose", verbose, "report both conventions side by side");

  auto *lif = app.add_subcommand("li-f", "Li coefficients tau_f(n) of one newform from eigenvalue data");
  std::string eigen_path, eigen_char;
  lif->add_option("--eigen", eigen_path, "EIGEN v1 file")->required();
  lif->add_option("--char", eigen_char, "character mod N (default trivial)");
  lif->add_option("--nmax", li_nmax)->default_val(1);
  lif->add_option("--cutoff", cutoff)->default_val(10000);
  lif->add_option("--csv", csv_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*trace) {
      if (!*n_opt && !*nmax_opt)
        throw hecke::DomainError("trace: give --n or --nmax");
      auto cache = open_cache(common);
      hecke::TraceFormula tf(make_space(common), cache.get());
      if (*n_opt) {
        emit(trace_json(common, trace_n, tf.trace(trace_n), exact));
      } else {
        std::vector<std::int64_t> ns;
        for (std::int64_t n = 1; n <= trace_nmax; ++n)
          ns.push_back(n);
        tf.precompute(ns, common.threads);
        for (std::int64_t n : ns)
          emit(trace_json(common, n, tf.trace(n), exact));
      }
    } else if (*dim) {
      auto cache = open_cache(common);
      hecke::TraceFormula tf(make_space(common), cache.get());
      json j = space_json(common);
      j["dim"] = tf.dimension();
      emit(j);
    } else if (*nu) {
      auto cache = open_cache(common);
      const auto space = make_space(common);
      const auto table = hecke::nu_table(space, cache.get());
      json j = space_json(common);
      j["conductor"] = table.conductor;
      json rows = json::array();
      for (const auto &[m, v] : table.nu)
        rows.push_back(json{{"m", m}, {"nu", v}, {"dim", table.dimensions.at(m)}});
      j["nu"] = rows;
      j["level_log_term"] = real15(hecke::level_log_term(table));
      emit(j);
    } else if (*classnum) {
      const auto entry = hecke::class_number(disc);
      json forms = json::array();
      for (const auto &f : hecke::reduced_forms(disc))
        forms.push_back(json::array({f.a, f.b, f.c}));
      emit(json{{"D", disc}, {"h", entry.h}, {"w", entry.w}, {"forms", forms}});
    } else if (*check1) {
      hecke::TraceFormula tf(hecke::HeckeSpace::trivial(oracle_k, 1));
      bool all = true;
      for (std::int64_t n = 1; n <= oracle_nmax; ++n) {
        const auto formula = *tf.trace(n).snapped;
        const auto expected = hecke::oracle::trace_oracle(n, oracle_k);
        all = all && formula == expected;
        emit(json{{"k", oracle_k}, {"n", n}, {"trace_formula", formula.get_str()},
                  {"oracle", expected.get_str()}, {"match", formula == expected}});
      }
      if (!all)
        return 4;
    } else if (*dimg0) {
      hecke::TraceFormula tf(hecke::HeckeSpace::trivial(oracle_k, oracle_N));
      const auto expected = hecke::oracle::gamma0_dimension_oracle(oracle_N, oracle_k);
      const auto got = tf.dimension();
      emit(json{{"N", oracle_N}, {"k", oracle_k}, {"oracle", expected}, {"trace_formula", got},
                {"match", expected == got}});
      if (expected != got)
        return 4;
    } else if (*eigen_delta) {
      if (eigen_cutoff < 2)
        throw hecke::DomainError("cutoff must be >= 2");
      const auto delta = hecke::oracle::delta_jacobi(eigen_cutoff);
      std::cout << "EIGEN v1 12 1\n";
      for (std::int64_t p : hecke::sieve_primes(eigen_cutoff))
        std::cout << p << ' ' << delta[p].get_str() << '\n';
    } else if (*zero_sum) {
      const auto alpha = parse_alpha(alpha_text);
      const auto z = hecke::euler_factor_zero_sum(alpha, euler_p, euler_n, euler_K);
      emit(json{{"alpha_re", real15(alpha.real())}, {"alpha_im", real15(alpha.imag())}, {"p", euler_p},
                {"n", euler_n}, {"K", euler_K}, {"value_re", real15(z.value.real())},
                {"value_im", real15(z.value.imag())}, {"partial_re", real15(z.partial.real())},
                {"partial_im", real15(z.partial.imag())}, {"tail_re", real15(z.tail.real())},
                {"tail_im", real15(z.tail.imag())}, {"tail_bound", real15(z.tail_bound)}});
    } else if (*li_sum) {
      const auto alpha = parse_alpha(alpha_text);
      const auto v = hecke::euler_factor_li_sum(alpha, euler_p, euler_n);
      emit(json{{"alpha_re", real15(alpha.real())}, {"alpha_im", real15(alpha.imag())}, {"p", euler_p},
                {"n", euler_n}, {"value_re", real15(v.real())}, {"value_im", real15(v.imag())}});
    } else if (*li) {
      auto cache = open_cache(common);
      hecke::TraceFormula tf(make_space(common), cache.get());
      hecke::LiOptions opt;
      opt.nmax = li_nmax;
      opt.cutoff = cutoff;
      opt.convention = hecke::parse_convention(convention);
      opt.threads = common.threads;
      const auto rows = hecke::tau_N(tf, opt);
      std::vector<hecke::LiReport> other;
      if (verbose) {
        auto alt = opt;
        alt.convention = opt.convention == hecke::Convention::paper ? hecke::Convention::hadamard_corrected
                                                                     : hecke::Convention::paper;
        other = hecke::tau_N(tf, alt);
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        json j = report_json(common, rows[i]);
        if (verbose) {
          const auto &paper = opt.convention == hecke::Convention::paper ? rows[i] : other[i];
          const auto &corrected = opt.convention == hecke::Convention::paper ? other[i] : rows[i];
          j["tau_paper"] = real15(paper.tau);
          j["tau_hadamard_corrected"] = real15(corrected.tau);
        }
        emit(j);
      }
      if (!csv_path.empty())
        write_csv(csv_path, rows);
      emit_summary(rows, cutoff);
    } else if (*lif) {
      std::optional<hecke::DirichletCharacter> chi;
      {
        // The character spec needs the level, which lives in the file header.
        std::ifstream in(eigen_path);
        if (!in)
          throw hecke::DataError("cannot open eigen file '" + eigen_path + "'");
        std::string magic, version;
        int k = 0;
        std::int64_t N = 0;
        in >> magic >> version >> k >> N;
        if (!eigen_char.empty() && N > 0)
          chi = hecke::parse_character_spec(eigen_char, N);
      }
      const auto eigen = hecke::EigenData::load(eigen_path, chi);
      for (const auto &w : eigen.warnings)
        std::cerr << "warning: " << w << '\n';
      const auto rows = hecke::tau_f(eigen, li_nmax, cutoff);
      Common shown;
      shown.weight = eigen.weight;
      shown.level = eigen.level;
      shown.chi = eigen_char.empty() ? "trivial" : eigen_char;
      for (const auto &r : rows)
        emit(report_json(shown, r));
      if (!csv_path.empty())
        write_csv(csv_path, rows);
      emit_summary(rows, cutoff);
    }
  } catch (const hecke::DomainError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hecke::DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const hecke::ConsistencyError &e) {
    std::cerr << "internal consistency error: " << e.what() << '\n';
    return 4;
  } catch (const hecke::ResourceError &e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 5;
  } catch (const hecke::PrecisionError &e) {
    std::cerr << "precision error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
