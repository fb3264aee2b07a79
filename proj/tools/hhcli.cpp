// hh: command-line front end for the Hermite-Hadamard bound library.
//
//   hh verify    --target <id> --fn <expr> [--a A --b B | --trials N --seed S] ...
//   hh integrate --fn <expr> --a A --b B --err E [--q Q]
//   hh special   besselI|besselK|normI|qdigamma --x X [--p P] [--q Q] [--order K]
//
// Every invocation prints one JSON document (or a table with --pretty).
// Exit codes: 0 no violations, 1 at least one violated inequality,
// 2 usage, parse, domain or guard error.

#include "hh/hh.hpp"
#include "run_report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kMaxRejections = 25;

constexpr const char* kGrammarHelp = R"HELP(Function syntax (--fn):
  A function of the single variable x built from
    numbers (1, 2.5, 1e-3), x, + - * / ^, unary -, parentheses,
    exp(.) log(.) sqrt(.) sinh(.) cosh(.) abs(.)
  Precedence: ^ binds tighter than unary -, which binds tighter than * /,
  then + -. ^ is right-associative and its exponent must not contain x.
  No implicit multiplication: write 2*x, not 2x.
  Examples: "x^2", "1/x^2", "x*log(x)", "exp(x) - 5", "cosh(2*x)".

verify targets:
  eq1 k1 k2 lemma1 lemma2 thm2 thm3 thm4 thm5 thm6 thm7 cor1 cor2
  prop1 ... prop9 all
  prop1-3 use f = x^n (--n), x^-2, x^-1 and ignore --fn; prop6/7 use --p;
  prop8/9 use --qbase; prop4/5 use a uniform partition with --panels.

Random mode (no --a/--b): a ~ U(0.5, 5), b = a + U(0.1, 2), redrawn up to
25 times per trial and target until the hypotheses hold.

Environment: HH_TOL overrides the absolute tolerance (default 1e-12).
Exit codes: 0 no violations, 1 violation finding, 2 usage/domain error.)HELP";

struct VerifyOptions {
  std::string target;
  std::string fn;
  std::optional<double> a;
  std::optional<double> b;
  double q = 1;
  int trials = 1;
  unsigned long long seed = 1;
  int n = 2;
  double p = 2;
  double qbase = 0.5;
  int panels = 4;
  unsigned jobs = 0;
  bool pretty = false;
};

const std::vector<std::string> kTargets = {"eq1",   "k1",    "k2",    "lemma1", "lemma2", "thm2",  "thm3",
                                           "thm4",  "thm5",  "thm6",  "thm7",   "cor1",   "cor2",  "prop1",
                                           "prop2", "prop3", "prop4", "prop5",  "prop6",  "prop7", "prop8",
                                           "prop9"};

bool needs_fn(const std::string& t) {
  return !(t == "prop1" || t == "prop2" || t == "prop3" || t == "prop6" || t == "prop7" || t == "prop8" ||
           t == "prop9");
}

// Targets that exist only when the Hölder conjugate does.
bool needs_conjugate(const std::string& t) { return t == "thm3" || t == "thm5" || t == "thm6"; }

std::vector<hh::BoundReport> run_target(const std::string& target, const std::optional<hh::Expr>& f,
                                        const hh::Interval& iv, const VerifyOptions& opt,
                                        const hh::ToleranceConfig& cfg) {
  using namespace hh;
  auto echo = [&] { return InputEcho{f->text(), iv.a(), iv.b(), {}}; };
  std::vector<BoundReport> out;

  if (target == "eq1") {
    auto [l, r] = hh_classic_check(*f, iv, cfg);
    out = {l, r};
  } else if (target == "k1") {
    auto [l, r] = three_point_check(*f, iv, cfg);
    out = {l, r};
  } else if (target == "k2") {
    out = {abs_half_check(*f, iv, cfg)};
  } else if (target == "lemma1" || target == "lemma2") {
    const Lemma which = target == "lemma1" ? Lemma::TrapezoidIdentity : Lemma::MidpointIdentity;
    out = {make_report(target, lemma_identity_residual(which, *f, iv, cfg), kLemmaResidualTol, echo(), cfg)};
  } else if (target == "thm2" || target == "thm3" || target == "cor1") {
    const FirstOrderBounds fb = first_order_bounds(*f, iv, opt.q, cfg);
    const InputEcho e = echo().with("q", opt.q);
    if (target == "thm2") {
      out = {make_report("thm2", fb.lhs, fb.rhs_thm2, e, cfg)};
    } else if (target == "thm3") {
      out = {make_report("thm3", fb.lhs, *fb.rhs_thm3, e, cfg)};
    } else {
      BoundReport cor = make_report("cor1", fb.lhs, fb.rhs_min, e, cfg);
      if (fb.k2_derived)
        cor.details = {{"k2_derived", *fb.k2_derived}, {"k2_printed", *fb.k2_printed}};
      out = {cor};
      if (fb.k2_printed) {
        // rhs_thm2 = K1 (b-a) S^{1/q}, so the printed corollary is min(K1, K2) * 8 * rhs_thm2.
        out.push_back(make_report("cor1.printed", fb.lhs, std::min(kK1, *fb.k2_printed) * 8 * fb.rhs_thm2, e, cfg));
      }
    }
  } else if (target == "thm4" || target == "thm5" || target == "thm6" || target == "thm7" || target == "cor2") {
    const SecondOrderBounds sb = second_order_bounds(*f, iv, opt.q, cfg);
    const InputEcho e = echo().with("q", opt.q);
    if (target == "thm4")
      out = {make_report("thm4", sb.lhs, sb.rhs_k3, e, cfg)};
    else if (target == "thm5")
      out = {make_report("thm5", sb.lhs, *sb.rhs_k4, e, cfg)};
    else if (target == "thm6")
      out = {make_report("thm6", sb.lhs, *sb.rhs_k5, e, cfg)};
    else if (target == "thm7")
      out = {make_report("thm7", sb.lhs, sb.rhs_k6, e, cfg)};
    else
      out = {make_report("cor2", sb.lhs, sb.rhs_min, e, cfg)};
  } else if (target == "prop1" || target == "prop2" || target == "prop3") {
    MeansProposition prop = ReciprocalMeans{opt.q};
    if (target == "prop1")
      prop = PowerMeans{opt.n, opt.q};
    else if (target == "prop2")
      prop = InverseSquareMeans{opt.q};
    auto [d1, d2] = means_proposition_check(prop, iv.a(), iv.b(), cfg);
    out = {d1, d2};
  } else if (target == "prop4") {
    out = {prop4_check(*f, Partition::uniform(iv, static_cast<std::size_t>(opt.panels)), cfg)};
  } else if (target == "prop5") {
    const Partition P = Partition::uniform(iv, static_cast<std::size_t>(opt.panels));
    const double bound = midpoint_error_bound(*f, P, opt.q, cfg);
    const double integral = integrate_ref(*f, iv, kOracleTol, cfg).value;
    out = {make_report("prop5", std::abs(integral - midpoint_T2(*f, P)), bound,
                       echo().with("q", opt.q).with("panels", opt.panels), cfg)};
  } else if (target == "prop6") {
    out = bessel_prop6_checks(opt.p, iv.a(), iv.b(), cfg);
  } else if (target == "prop7") {
    out = {bessel_prop7_check(opt.p, iv.a(), iv.b(), cfg)};
  } else if (target == "prop8" || target == "prop9") {
    auto both = qdigamma_prop_checks(opt.qbase, iv.a(), iv.b(), cfg);
    out = {target == "prop8" ? both[0] : both[1]};
  } else {
    throw PreconditionError("unknown target '" + target + "'");
  }
  return out;
}

struct TrialOutcome {
  std::vector<hhcli::TrialReport> reports;
  std::vector<hhcli::GuardedOut> guarded;
};

// One trial over the given targets. With a fixed interval errors are recorded
// as guarded; in random mode the interval is redrawn first.
TrialOutcome run_trial(int trial, const std::vector<std::string>& targets, const std::optional<hh::Expr>& f,
                       const VerifyOptions& opt, const hh::ToleranceConfig& cfg) {
  TrialOutcome out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::string& target = targets[t];
    std::seed_seq seq{static_cast<unsigned>(opt.seed & 0xffffffffu), static_cast<unsigned>(opt.seed >> 32),
                      static_cast<unsigned>(trial), static_cast<unsigned>(t)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> left(0.5, 5.0);
    std::uniform_real_distribution<double> width(0.1, 2.0);

    const int attempts = opt.a ? 1 : kMaxRejections;
    std::string reason;
    bool done = false;
    for (int k = 0; k < attempts && !done; ++k) {
      double a = 0, b = 0;
      if (opt.a) {
        a = *opt.a;
        b = *opt.b;
      } else {
        a = left(rng);
        b = a + width(rng);
      }
      try {
        for (auto& r : run_target(target, f, hh::Interval(a, b), opt, cfg))
          out.reports.push_back({trial, std::move(r)});
        done = true;
      } catch (const hh::GuardFailure& e) {
        reason = e.what();
      } catch (const hh::DomainError& e) {
        reason = e.what();
      } catch (const hh::PreconditionError& e) {
        reason = e.what();
      } catch (const hh::ConvergenceError& e) {
        reason = e.what();
      }
    }
    if (!done)
      out.guarded.push_back({trial, target, reason});
  }
  return out;
}

hh::ToleranceConfig tolerance_from_env(int max_terms) {
  hh::ToleranceConfig cfg;
  if (const char* env = std::getenv("HH_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0))
      throw hh::PreconditionError("HH_TOL must be a positive number");
    cfg.abs_tol = v;
  }
  if (max_terms > 0)
    cfg.max_series_terms = max_terms;
  cfg.validate();
  return cfg;
}

void emit(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

int cmd_verify(const VerifyOptions& opt, const hh::ToleranceConfig& cfg) {
  if (opt.a.has_value() != opt.b.has_value())
    throw CLI::ValidationError("--a and --b must be given together");

  std::vector<std::string> targets;
  if (opt.target == "all") {
    for (const auto& t : kTargets)
      if (!(needs_conjugate(t) && !(opt.q > 1)))
        targets.push_back(t);
  } else {
    if (std::find(kTargets.begin(), kTargets.end(), opt.target) == kTargets.end())
      throw CLI::ValidationError("unknown target '" + opt.target + "'");
    if (needs_conjugate(opt.target) && !(opt.q > 1))
      throw CLI::ValidationError(opt.target + " requires --q > 1");
    targets.push_back(opt.target);
  }

  std::optional<hh::Expr> f;
  if (!opt.fn.empty())
    f = hh::parse(opt.fn);
  else if (std::any_of(targets.begin(), targets.end(), needs_fn))
    throw CLI::ValidationError("--fn is required for target " + opt.target);

  const int trials = opt.a ? 1 : opt.trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  {
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.jobs ? opt.jobs : std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(trials)));
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < trials; i = next++)
          outcomes[static_cast<std::size_t>(i)] = run_trial(i, targets, f, opt, cfg);
      });
  }

  hhcli::RunReport run;
  run.command = {{"subcommand", "verify"}, {"target", opt.target}, {"fn", opt.fn}};
  if (opt.a) {
    run.command["a"] = *opt.a;
    run.command["b"] = *opt.b;
  } else {
    run.command["trials"] = opt.trials;
    run.command["seed"] = opt.seed;
  }
  run.command["q"] = opt.q;
  run.command["abs_tol"] = cfg.abs_tol;
  for (auto& o : outcomes) {
    run.reports.insert(run.reports.end(), o.reports.begin(), o.reports.end());
    run.guarded.insert(run.guarded.end(), o.guarded.begin(), o.guarded.end());
  }

  if (opt.pretty)
    hhcli::print_pretty(run);
  else
    emit(hhcli::to_json(run));

  if (opt.a && opt.target != "all" && !run.guarded.empty()) {
    std::cerr << "hh: " << run.guarded.front().reason << "\n";
    return kExitUsage;
  }
  return run.violated() > 0 ? kExitViolation : 0;
}

int cmd_integrate(const std::string& fn, double a, double b, double err, double q, bool pretty,
                  const hh::ToleranceConfig& cfg) {
  const hh::Expr f = hh::parse(fn);
  const hh::Interval iv(a, b);
  const hh::QuadratureResult res = hh::adaptive_midpoint(f, iv, err, q, cfg);

  hhcli::RunReport run;
  run.command = {{"subcommand", "integrate"}, {"fn", fn}, {"a", a}, {"b", b}, {"err", err}, {"q", q}};
  // The certificate must dominate the reference error.
  run.reports.push_back({0, hh::make_report("prop5.certificate", std::abs(*res.oracle_value - res.t2), res.e2_bound,
                                            hh::InputEcho{fn, a, b, {{"q", q}}}, cfg)});

  nlohmann::ordered_json doc = hhcli::to_json(run);
  doc["result"] = {{"t2", res.t2},
                   {"t1", res.t1},
                   {"certificate", res.e2_bound},
                   {"certified", res.certified},
                   {"panels", res.partition.panels()},
                   {"oracle", *res.oracle_value},
                   {"abs_error_vs_oracle", std::abs(*res.oracle_value - res.t2)}};
  if (pretty) {
    std::printf("T2          %.17g\nT1          %.17g\ncertificate %.6g (%s)\npanels      %zu\noracle      %.17g\n",
                res.t2, res.t1, res.e2_bound, res.certified ? "certified" : "target not reached",
                res.partition.panels(), *res.oracle_value);
  } else {
    emit(doc);
  }
  return run.violated() > 0 ? kExitViolation : 0;
}

int cmd_special(const std::string& what, double p, double x, double q, int order, bool pretty,
                const hh::ToleranceConfig& cfg) {
  hh::SeriesResult r;
  nlohmann::ordered_json command = {{"subcommand", "special"}, {"function", what}, {"x", x}};
  if (what == "besselI") {
    r = hh::bessel_I(p, x, cfg);
    command["p"] = p;
  } else if (what == "besselK") {
    r = hh::bessel_K(p, x, cfg);
    command["p"] = p;
  } else if (what == "normI") {
    r = hh::normalized_I_series(p, x, cfg);
    command["p"] = p;
  } else if (what == "qdigamma") {
    r = order == 0 ? hh::q_digamma(q, x, cfg) : hh::q_digamma_deriv(q, x, order, cfg);
    command["q"] = q;
    command["order"] = order;
  } else {
    throw CLI::ValidationError("unknown special function '" + what + "'");
  }
  if (pretty) {
    std::printf("value       %.17g\nterms_used  %d\ntail_bound  %.3g\n", r.value, r.terms_used, r.tail_bound);
  } else {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["value"] = r.value;
    doc["terms_used"] = r.terms_used;
    doc["tail_bound"] = r.tail_bound;
    emit(doc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-Hadamard bound verification, certified midpoint quadrature and special functions"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);

  bool pretty = false;
  int max_terms = 0;
  app.add_flag("--pretty", pretty, "Human-readable table instead of JSON");
  app.add_option("--max-terms", max_terms, "Series term budget (default 500)")->check(CLI::PositiveNumber);

  VerifyOptions vopt;
  double va = 0, vb = 0;
  auto* verify = app.add_subcommand("verify", "Check named inequalities on given or random intervals");
  verify->add_option("--target", vopt.target, "Inequality id or 'all'")->required();
  verify->add_option("--fn", vopt.fn, "Function of x (see grammar below)");
  auto* opt_a = verify->add_option("--a", va, "Left endpoint");
  auto* opt_b = verify->add_option("--b", vb, "Right endpoint");
  verify->add_option("--q", vopt.q, "Exponent q >= 1")->check(CLI::Range(1.0, 1e6));
  verify->add_option("--trials", vopt.trials, "Random intervals to draw")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopt.seed, "Seed for the interval generator");
  verify->add_option("--n", vopt.n, "Power n for prop1");
  verify->add_option("--p", vopt.p, "Bessel order for prop6/prop7");
  verify->add_option("--qbase", vopt.qbase, "q of the q-digamma function for prop8/prop9");
  verify->add_option("--panels", vopt.panels, "Uniform panels for prop4/prop5")->check(CLI::PositiveNumber);
  verify->add_option("--jobs", vopt.jobs, "Worker threads (default: hardware concurrency)");

  std::string ifn;
  double ia = 0, ib = 0, ierr = 0, iq = 1;
  auto* integrate = app.add_subcommand("integrate", "Certified adaptive midpoint integration");
  integrate->add_option("--fn", ifn, "Function of x")->required();
  integrate->add_option("--a", ia, "Left endpoint")->required();
  integrate->add_option("--b", ib, "Right endpoint")->required();
  integrate->add_option("--err", ierr, "Target certificate")->required()->check(CLI::PositiveNumber);
  integrate->add_option("--q", iq, "Exponent q >= 1")->check(CLI::Range(1.0, 1e6));

  std::string what;
  double sp = 0, sx = 0, sq = 0.5;
  int sorder = 0;
  auto* special = app.add_subcommand("special", "Evaluate a special function");
  special->add_option("function", what, "besselI | besselK | normI | qdigamma")
      ->required()
      ->check(CLI::IsMember({"besselI", "besselK", "normI", "qdigamma"}));
  special->add_option("--p", sp, "Order p");
  special->add_option("--x", sx, "Argument x")->required();
  special->add_option("--q", sq, "q of the q-digamma function");
  special->add_option("--order", sorder, "Derivative order of qdigamma (0-3)")->check(CLI::Range(0, 3));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const hh::ToleranceConfig cfg = tolerance_from_env(max_terms);
    if (*verify) {
      if (*opt_a)
        vopt.a = va;
      if (*opt_b)
        vopt.b = vb;
      vopt.pretty = pretty;
      return cmd_verify(vopt, cfg);
    }
    if (*integrate)
      return cmd_integrate(ifn, ia, ib, ierr, iq, pretty, cfg);
    return cmd_special(what, sp, sx, sq, sorder, pretty, cfg);
  } catch (const CLI::Error& e) {
    std::cerr << "hh: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // Parse, domain, guard, precondition and convergence failures.
    std::cerr << "hh: " << e.what() << "\n";
    return kExitUsage;
  }
}
