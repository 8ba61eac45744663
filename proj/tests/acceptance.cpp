// Acceptance checks. Usage: acceptance <1..10|all> [--cli PATH]
// Prints one "criterion N: PASS|FAIL ..." line per criterion run and exits
// nonzero if any failed.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>

#include "hecke/hecke.hpp"
#include "test_support.hpp"

using namespace hecke;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what) {
    if (!ok && pass)
      detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string cli_path;

// ---------------------------------------------------------------------------

void trace_oracle_equality(Outcome &out) {
  const auto start = std::chrono::steady_clock::now();
  int compared = 0;
  for (int k : {12, 16, 18, 20, 22, 26}) {
    TraceFormula tf(HeckeSpace::trivial(k, 1));
    for (std::int64_t n = 1; n <= 50; ++n) {
      const auto t = tf.trace(n);
      const Integer expect = oracle::trace_oracle(n, k);
      out.require(t.snapped.has_value() && *t.snapped == expect,
                  "k=" + std::to_string(k) + " n=" + std::to_string(n));
      ++compared;
    }
  }
  TraceFormula delta(HeckeSpace::trivial(12, 1));
  out.require(*delta.trace(2).snapped == -24, "tr T(2) = -24");
  out.require(*delta.trace(3).snapped == 252, "tr T(3) = 252");
  out.require(*delta.trace(5).snapped == 4830, "tr T(5) = 4830");
  const double elapsed = seconds_since(start);
  out.require(elapsed < 60.0, "runtime under 60 s");
  out.detail << compared << " traces equal to the q-expansion oracle in " << elapsed << " s";
}

void dimension_equality(Outcome &out) {
  int compared = 0;
  for (std::int64_t N = 1; N <= 50; ++N)
    for (int k : {4, 6, 8}) {
      const auto got = TraceFormula(HeckeSpace::trivial(k, N)).dimension();
      out.require(got == oracle::gamma0_dimension_oracle(N, k), "N=" + std::to_string(N) + " k=" + std::to_string(k));
      ++compared;
    }
  out.detail << compared << " dimensions equal to the Gamma0(N) formula";
}

void class_numbers(Outcome &out) {
  int compared = 0;
  for (std::int64_t D = -3; D >= -10000; --D) {
    if (!is_negative_discriminant(D))
      continue;
    const auto dual = static_cast<std::int64_t>(reduced_forms_by_b(D).size());
    out.require(class_number(D).h == dual, "D=" + std::to_string(D));
    ++compared;
  }
  auto spot = [&](std::int64_t D, std::int64_t h, std::int64_t w) {
    const auto c = class_number(D);
    out.require(c.h == h && c.w == w, "spot value D=" + std::to_string(D));
  };
  spot(-3, 1, 6);
  spot(-4, 1, 4);
  spot(-15, 2, 2);
  spot(-23, 3, 2);
  out.detail << compared << " discriminants agree with the dual-order enumeration";
}

void b_p_squared(Outcome &out) {
  const auto tau = oracle::delta_q(100);
  TraceFormula tf(HeckeSpace::trivial(12, 1));
  int compared = 0;
  for (std::int64_t p : sieve_primes(100)) {
    const Integer expect = tau[p] * tau[p] - 2 * ipow(Integer(p), 11);
    const auto b = tf.b_coefficient(p, 2);
    out.require(b.snapped.has_value() && *b.snapped == expect, "p=" + std::to_string(p));
    ++compared;
  }
  out.detail << compared << " primes, B(p^2) = tau(p)^2 - 2p^11 exactly";
}

void series_closed_forms(Outcome &out) {
  const double c3 = std::abs(archimedean_c1(3).value - 1.5);
  double odd = 0;
  for (int j = 0; j <= 6; ++j)
    odd += 1.0 / (2 * j + 1);
  const double c12 = std::abs(archimedean_c1(12).value - (2 * odd - 2 * std::log(2.0)));
  const double h23 = std::abs(hurwitz_tail(2, 3).value - (std::numbers::pi * std::numbers::pi / 6 - 1));
  double dual = 0;
  for (int k = 3; k <= 40; ++k)
    dual = std::max(dual, std::abs(archimedean_c1_direct(k).value - archimedean_c1_digamma(k)));
  out.require(c3 <= 1e-12, "c1(3) = 3/2");
  out.require(c12 <= 1e-10, "c1(12) closed form");
  out.require(h23 <= 1e-12, "hurwitz_tail(2,3)");
  out.require(dual <= 1e-10, "dual-path agreement");
  out.detail << "errors: c1(3) " << c3 << ", c1(12) " << c12 << ", hurwitz(2,3) " << h23 << ", dual max " << dual;
}

void profile_quadrature(Outcome &out) {
  double worst = 0;
  for (int n = 1; n <= 5; ++n)
    for (std::complex<double> s : {std::complex<double>(0.7, 0), std::complex<double>(2, 0),
                                   std::complex<double>(1, 1)})
      worst = std::max(worst, std::abs(test_support::profile_transform(n, s) - phi_n(n, s)));
  out.require(worst <= 1e-6, "quadrature within 1e-6");
  out.detail << "max |integral - Phi_n(s)| = " << worst;
}

void euler_factor(Outcome &out) {
  const double l2 = std::log(2.0);
  const auto z = euler_factor_zero_sum(1.0, 2, 1, 1000000);
  const double zero_err = std::abs(z.value.real() - 1.5 * l2);
  out.require(zero_err <= 1e-6, "zero sum -> (3/2) ln 2");
  out.require(z.tail_bound <= 1e-6, "tail bound");
  const double li_err = std::abs(euler_factor_li_sum(1.0, 2, 1) - l2);
  out.require(li_err <= 1e-12, "li sum = ln 2");
  double worst = 0;
  for (double alpha : {1.0, -1.0})
    for (std::int64_t p : {2, 3, 5})
      for (std::int64_t n = 1; n <= 3; ++n) {
        const auto gap = euler_factor_zero_sum(alpha, p, n, 1000000).value - euler_factor_li_sum(alpha, p, n);
        worst = std::max(worst, std::abs(gap - n * std::log(static_cast<double>(p)) / 2.0));
      }
  out.require(worst <= 1e-6, "discrepancy n ln p / 2");
  out.detail << "zero sum " << z.value.real() << " (err " << zero_err << ", tail bound " << z.tail_bound
             << "), discrepancy max err " << worst;
}

void tau_assembly(Outcome &out) {
  const auto d = oracle::delta_jacobi(10000);
  std::ostringstream text;
  text << "EIGEN v1 12 1\n";
  for (std::int64_t p : sieve_primes(10000))
    text << p << ' ' << d[p].get_str() << '\n';
  std::istringstream in(text.str());
  const auto eigen = EigenData::parse(in);

  TraceFormula tf(HeckeSpace::trivial(12, 1));
  LiOptions opt;
  opt.nmax = 10;
  opt.cutoff = 10000;
  const auto fromN = tau_N(tf, opt);
  const auto fromF = tau_f(eigen, 10, 10000);
  double worst = 0;
  for (int i = 0; i < 10; ++i)
    worst = std::max(worst, std::abs(fromN[i].tau - fromF[i].tau));
  out.require(worst <= 1e-12, "tau_N = tau_f");

  auto breakdown_holds = [](const std::vector<LiReport> &reports) {
    for (const auto &r : reports)
      if (r.tau != r.level_term + r.archimedean_term - r.prime_sum + r.binomial_tail)
        return false;
    return true;
  };
  out.require(breakdown_holds(fromN) && breakdown_holds(fromF), "breakdown identity");

  opt.nmax = 20;
  const auto empty = tau_N(TraceFormula(HeckeSpace::trivial(4, 1)), opt);
  bool zero = breakdown_holds(empty);
  for (const auto &r : empty)
    zero = zero && r.tau == 0.0;
  out.require(zero, "k=4 gives tau = 0");
  out.detail << "max |tau_N - tau_f| = " << worst << " for n <= 10 at X = 10^4";
}

void positivity(Outcome &out) {
  const auto start = std::chrono::steady_clock::now();
  TraceFormula tf(HeckeSpace::trivial(12, 1));
  for (std::int64_t X : {1000, 10000, 100000}) {
    LiOptions opt;
    opt.nmax = 20;
    opt.cutoff = X;
    opt.threads = 8;
    const auto reports = tau_N(tf, opt);
    double min_tau = reports[0].tau;
    for (const auto &r : reports) {
      min_tau = std::min(min_tau, r.tau);
      out.require(r.tau > 0, "tau(" + std::to_string(r.n) + ") > 0 at X=" + std::to_string(X));
      if (r.n <= 5)
        out.require(r.oscillation_band < r.tau, "band < tau for n=" + std::to_string(r.n) +
                                                    " at X=" + std::to_string(X));
    }
    out.detail << "X=" << X << ": min tau " << min_tau << ", band/tau n<=5:";
    for (int i = 0; i < 5; ++i)
      out.detail << ' ' << reports[i].oscillation_band << '/' << reports[i].tau;
    out.detail << "; ";
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < 300.0, "runtime under 5 min");
  out.detail << elapsed << " s";
}

// ---------------------------------------------------------------------------

std::string run_cli(const std::string &args, const std::filesystem::path &cache_dir) {
  const std::string command = "HECKE_CACHE_DIR='" + cache_dir.string() + "' '" + cli_path + "' " + args;
  FILE *pipe = popen(command.c_str(), "r");
  if (!pipe)
    throw std::runtime_error("cannot run " + command);
  std::string output;
  std::array<char, 4096> buffer;
  while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe))
    output.append(buffer.data(), got);
  const int status = pclose(pipe);
  if (status != 0)
    throw std::runtime_error("exit status " + std::to_string(status) + " from " + command);
  return output;
}

void determinism(Outcome &out) {
  if (cli_path.empty()) {
    out.require(false, "--cli PATH not given");
    return;
  }
  std::vector<std::string> workloads;
  for (int k : {12, 16, 18, 20, 22, 26})
    workloads.push_back("trace --weight " + std::to_string(k) + " --level 1 --nmax 50");
  workloads.push_back("li --weight 12 --level 1 --nmax 10 --cutoff 10000");
  for (int X : {1000, 10000, 100000})
    workloads.push_back("li --weight 12 --level 1 --nmax 20 --cutoff " + std::to_string(X));

  const auto root = std::filesystem::temp_directory_path() / ("hecke_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  int compared = 0;
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    const auto a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
    const auto &w = workloads[i];
    const std::string cold1 = run_cli(w + " --threads 1", a);
    const std::string warm8 = run_cli(w + " --threads 8", a);
    const std::string cold8 = run_cli(w + " --threads 8", b);
    const std::string warm1 = run_cli(w + " --threads 1", b);
    const std::string uncached = run_cli(w + " --threads 8 --no-cache", root / "unused");
    out.require(!cold1.empty(), "nonempty output for " + w);
    out.require(cold1 == warm8 && cold1 == cold8 && cold1 == warm1 && cold1 == uncached, "identical output for " + w);
    compared += 5;
  }
  std::filesystem::remove_all(root);
  out.detail << compared << " CLI runs over " << workloads.size()
             << " workloads, threads 1/8 and cold/warm/no cache byte-identical";
}

const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> &criteria() {
  static const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> list = {
      {"trace oracle equality", trace_oracle_equality},
      {"dimension equality", dimension_equality},
      {"class numbers", class_numbers},
      {"B(p^2) at level one", b_p_squared},
      {"series closed forms", series_closed_forms},
      {"profile quadrature", profile_quadrature},
      {"Euler-factor zero sums", euler_factor},
      {"tau assembly consistency", tau_assembly},
      {"positivity at desk scale", positivity},
      {"determinism", determinism}};
  return list;
}

bool run(std::size_t index) {
  const auto &[name, body] = criteria()[index - 1];
  Outcome out;
  try {
    body(out);
  } catch (const std::exception &e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  std::cout << "criterion " << index << ": " << (out.pass ? "PASS" : "FAIL") << " (" << name << ") "
            << out.detail.str() << std::endl;
  return out.pass;
}

} // namespace

int main(int argc, char **argv) {
  std::string which = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc)
      cli_path = argv[++i];
    else
      which = arg;
  }
  bool ok = true;
  if (which == "all") {
    for (std::size_t i = 1; i <= criteria().size(); ++i)
      ok = run(i) && ok;
  } else {
    const auto index = std::strtoul(which.c_str(), nullptr, 10);
    if (index < 1 || index > criteria().size()) {
      std::cerr << "usage: acceptance <1.." << criteria().size() << "|all> [--cli PATH]\n";
      return 2;
    }
    ok = run(index);
  }
  return ok ? 0 : 1;
}
