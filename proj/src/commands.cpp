#include "selfsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "selfsim/errors.hpp"
#include "selfsim/parallel.hpp"
#include "selfsim/renewal.hpp"

namespace selfsim::cli {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string fmt(std::complex<double> z) {
  std::ostringstream s;
  s << std::setprecision(17) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

void matrix_block(std::ostream& out, const std::string& key, const ifs::Mat& M, const std::string& indent) {
  out << indent << key << "\n";
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    out << indent << " ";
    for (Eigen::Index c = 0; c < M.cols(); ++c) out << " " << fmt(M(r, c));
    out << "\n";
  }
  out << indent << "end\n";
}

algebra::PrecisionContext context_of(const RunOptions& run) { return {run.precision_bits, 1e-40}; }

struct Prepared {
  ifs::IFS system;
  ifs::IFS normalized;
};

Prepared prepare(const config::SystemConfig& cfg) {
  ifs::IFS sys = cfg.system();
  if (cfg.subspace) sys = ifs::project_ifs(sys, *cfg.subspace);
  return {sys, ifs::normalize_first_map(sys)};
}

std::vector<ifs::Vec> translations(const ifs::IFS& s) {
  std::vector<ifs::Vec> out;
  for (const auto& m : s.maps()) out.push_back(m.translation);
  return out;
}

void write_text(std::ostringstream& out, const config::SystemConfig& cfg, const RunOptions& run,
                const DecisionReport& rep) {
  out << "verdict " << to_string(rep.verdict) << "\n";
  if (!cfg.name.empty()) out << "system " << cfg.name << "\n";
  out << "dimension " << cfg.dimension << "\n";
  out << "maps " << cfg.maps.size() << "\n";
  out << "subspace " << (cfg.subspace ? std::to_string(cfg.subspace->cols()) : std::string("none")) << "\n";
  out << "precision_bits " << run.precision_bits << "\n";
  out << "tol " << fmt(run.tol) << "\n";
  out << "denom_bound " << run.denom_bound << "\n";
  out << "max_closure " << run.max_closure << "\n";
  if (run.forced_k) out << "forced_k " << *run.forced_k << "\n";
  out << "irreducible " << (rep.irreducibility.irreducible ? "yes" : "no") << "\n";
  out << "affine_rank " << rep.irreducibility.rank << "\n";
  if (rep.discreteness) {
    const auto& d = *rep.discreteness;
    const bool lattice = d.psi.kind == group::PsiImage::Kind::lattice;
    out << "psi_image " << (lattice ? "lattice" : "dense-candidate") << "\n";
    if (lattice) {
      out << "beta " << fmt(d.psi.beta) << "\n";
      out << "exponents";
      for (long long e : d.psi.exponents) out << " " << e;
      out << "\n";
    }
    out << "kernel_finite " << (d.kernel.finite ? "yes" : "no") << "\n";
    out << "kernel_size " << d.kernel.elements.size() << "\n";
    if (d.h) matrix_block(out, "h_rotation", d.h->U, "");
  }
  for (const auto& g : rep.generators) {
    const auto& c1 = g.cert1;
    out << "generator " << c1.generator_index << "\n";
    matrix_block(out, "A", c1.generator_A, "  ");
    out << "  condition_one " << (c1.holds ? "holds" : "fails") << "\n";
    out << "  condition_one_residual " << fmt(c1.residual) << "\n";
    out << "  coset_exponents";
    for (long long l : c1.coset_exponents) out << " " << l;
    out << "\n  coset_elements";
    for (int e : c1.coset_elements) out << " " << e;
    out << "\n";
    if (!c1.note.empty()) out << "  note " << c1.note << "\n";
    if (g.cert2) {
      const auto& c2 = *g.cert2;
      out << "  condition_two " << group::to_string(c2.status) << "\n";
      if (c2.status == group::ConditionStatus::holds) {
        out << "  k " << c2.k << "\n";
        for (auto th : c2.theta_values) out << "  theta " << fmt(th) << "\n";
        if (c2.thetas) out << "  theta_poly " << c2.thetas->defining_poly().to_string() << "\n";
        if (c2.pv)
          out << "  pv " << algebra::to_string(c2.pv->status) << " margin " << selfsim::to_string(c2.pv->inside_margin, 12)
              << "\n";
        for (std::size_t j = 0; j < c2.zetas.size(); ++j) {
          out << "  zeta " << j;
          for (Eigen::Index i = 0; i < c2.zetas[j].size(); ++i) out << " " << fmt(c2.zetas[j](i));
          out << "\n";
        }
        out << "  reference map " << c2.reference.first + 1 << " kernel " << c2.reference.second << "\n";
        for (const auto& [key, coeffs] : c2.polys) {
          out << "  poly map " << key.first + 1 << " kernel " << key.second << ":";
          for (const auto& q : coeffs) out << " " << q;
          out << "\n";
        }
        if (c2.repeated_fallback) out << "  repeated_eigenvalue_fallback yes\n";
        out << "  reverify_residual " << fmt(g.reverify_residual) << "\n";
      }
      if (!c2.reason.empty()) out << "  reason " << c2.reason << "\n";
      out << "  candidates " << c2.candidates.size() << "\n";
    }
    out << "end\n";
  }
  if (rep.witness) {
    const auto& w = *rep.witness;
    out << "witness m " << w.m << " n_max " << w.values.size() - 1 << " bits " << w.bits_used << "\n";
    out << "witness_base_xi";
    for (Eigen::Index i = 0; i < w.base_xi.size(); ++i) out << " " << fmt(w.base_xi(i));
    out << "\n";
    out << "witness_min_abs " << fmt(w.min_abs) << "\n";
    out << "witness_floor " << fmt(run.witness_floor) << "\n";
  }
  for (const auto& r : rep.reasons) out << "reason " << r << "\n";
}

}  // namespace

void RunOptions::validate() const {
  if (precision_bits < 64) throw ContractError("precision must be at least 64 bits");
  if (!(tol > 0)) throw ContractError("tolerance must be positive");
  if (max_words < 1 || max_closure < 1 || denom_bound < 1 || max_generators < 1)
    throw ContractError("caps must be positive");
  if (witness_m < 0 || witness_n < 0) throw ContractError("witness offsets must be nonnegative");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::non_rajchman_witnessed:
      return "non-rajchman-witnessed";
    case Verdict::conditions_hold:
      return "conditions-hold";
    case Verdict::conditions_fail:
      return "conditions-fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

DecisionReport cmd_check(const config::SystemConfig& cfg, const RunOptions& run) {
  run.validate();
  DecisionReport rep;
  std::ostringstream text;
  auto finish = [&]() {
    write_text(text, cfg, run, rep);
    rep.text = text.str();
    return rep;
  };

  std::optional<Prepared> prep;
  try {
    prep.emplace(prepare(cfg));
  } catch (const ContractError& e) {
    rep.reasons.push_back(std::string("subspace rejected: ") + e.what());
    return finish();
  }
  const ifs::IFS& sys = prep->system;
  rep.irreducibility = ifs::is_affinely_irreducible(sys);
  if (!rep.irreducibility.irreducible) {
    rep.reasons.push_back("system is affinely reducible (rank " + std::to_string(rep.irreducibility.rank) + " of " +
                          std::to_string(sys.dimension()) + "); supply an invariant subspace");
    return finish();
  }
  rep.discreteness = group::discreteness_report(sys, run.denom_bound, run.max_closure);
  const auto& disc = *rep.discreteness;
  if (disc.psi.kind != group::PsiImage::Kind::lattice) {
    rep.reasons.push_back("dense-candidate psi-image (" + disc.psi.note +
                          "); a negative answer here rests on the dense-image hypothesis and is not certified");
    return finish();
  }
  if (!disc.kernel.finite) {
    rep.reasons.push_back("kernel closure did not terminate within " + std::to_string(run.max_closure) +
                          " elements");
    return finish();
  }

  const auto candidates = group::generator_candidates(disc);
  std::vector<std::size_t> which;
  if (run.generator) {
    if (*run.generator >= candidates.size()) throw ContractError("generator index out of range");
    which.push_back(*run.generator);
  } else {
    for (std::size_t i = 0; i < std::min(candidates.size(), run.max_generators); ++i) which.push_back(i);
    if (candidates.size() > which.size())
      rep.reasons.push_back("checked " + std::to_string(which.size()) + " of " + std::to_string(candidates.size()) +
                            " generator candidates");
  }

  const auto trans = translations(prep->normalized);
  const auto ctx = context_of(run);
  group::ConditionTwoOptions opts;
  opts.denom_bound = run.denom_bound;
  opts.tol = run.tol;
  opts.forced_k = run.forced_k;
  opts.pv_hints = cfg.pv_hints;

  bool any_holds = false, all_fail = true;
  for (std::size_t idx : which) {
    GeneratorResult g;
    g.cert1 = group::check_condition_one(sys, disc, idx);
    if (g.cert1.holds) {
      g.cert2 = group::check_condition_two(g.cert1, trans, ctx, opts);
      if (g.cert2->status == group::ConditionStatus::holds) {
        g.reverify_residual = group::reverify_condition_two(g.cert1, trans, *g.cert2);
        if (!(g.reverify_residual <= 10 * run.tol)) {
          g.cert2->status = group::ConditionStatus::inconclusive;
          g.cert2->reason = "independent re-verification failed (residual " + fmt(g.reverify_residual) + ")";
        }
      }
      any_holds = any_holds || g.cert2->status == group::ConditionStatus::holds;
      all_fail = all_fail && g.cert2->status == group::ConditionStatus::fails;
    } else {
      all_fail = false;
    }
    rep.generators.push_back(std::move(g));
  }

  if (any_holds) {
    rep.verdict = Verdict::conditions_hold;
  } else if (all_fail && !rep.generators.empty()) {
    rep.verdict = Verdict::conditions_fail;
  } else {
    rep.reasons.push_back("no generator produced a decision");
  }

  if (any_holds && run.witness) {
    const GeneratorResult* g = nullptr;
    for (const auto& r : rep.generators)
      if (r.cert2 && r.cert2->status == group::ConditionStatus::holds) {
        g = &r;
        break;
      }
    try {
      rep.witness = fourier::witness_sequence(prep->normalized, cfg.weights, g->cert1, *g->cert2, run.witness_m,
                                              run.witness_n, run.witness_tol, ctx);
      if (rep.witness->min_abs > run.witness_floor)
        rep.verdict = Verdict::non_rajchman_witnessed;
      else
        rep.reasons.push_back("witness minimum " + fmt(rep.witness->min_abs) + " is not above the floor " +
                              fmt(run.witness_floor) + " for these weights");
    } catch (const Error& e) {
      rep.reasons.push_back(std::string("witness skipped: ") + e.what());
    }
  }
  return finish();
}

std::string cmd_fourier_scan(const config::SystemConfig& cfg, const RunOptions& run, const ScanOptions& scan) {
  run.validate();
  if (scan.directions < 1) throw ContractError("need at least one direction");
  const auto ctx = context_of(run);
  std::ostringstream out;
  out << "xi_norm,direction,re,im,abs,error_bound,status\n";
  auto row = [&](double norm, const std::string& dir, const fourier::FourierValue& v) {
    out << fmt(norm) << "," << dir << "," << fmt(v.value.real()) << "," << fmt(v.value.imag()) << ","
        << fmt(std::abs(v.value)) << "," << fmt(v.error_bound) << ",ok\n";
  };
  auto failed = [&](double norm, const std::string& dir, const std::string& status) {
    out << fmt(norm) << "," << dir << ",,,,," << status << "\n";
  };

  if (scan.along_witness) {
    RunOptions r = run;
    r.witness = true;
    r.witness_tol = scan.tol;
    DecisionReport rep = cmd_check(cfg, r);
    if (!rep.witness) throw ContractError("no witness sequence available: verdict " + to_string(rep.verdict));
    for (std::size_t n = 0; n < rep.witness->values.size(); ++n)
      row(rep.witness->frequency_norms[n], "w" + std::to_string(n), rep.witness->values[n]);
    return out.str();
  }

  const auto prep = prepare(cfg);
  const int d = prep.system.dimension();
  std::vector<ifs::Vec> dirs;
  if (d == 1) {
    dirs.push_back(ifs::Vec::Ones(1));
  } else {
    std::mt19937_64 rng(splitmix64(run.seed));
    for (int k = 0; k < scan.directions; ++k) {
      ifs::Vec v = ifs::Vec::Zero(d);
      if (d == 2) {
        double a = M_PI * k / scan.directions;
        v << std::cos(a), std::sin(a);
      } else {
        for (int i = 0; i < d; ++i) v(i) = uniform01(rng) - 0.5;
        v.normalize();
      }
      dirs.push_back(v);
    }
  }
  fourier::Evaluator ev(prep.system, cfg.weights, ctx, run.max_words);
  for (double radius : scan.radii) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      try {
        row(radius, std::to_string(k), ev(ifs::Vec(radius * dirs[k]), scan.tol));
      } catch (const PrecisionError&) {
        failed(radius, std::to_string(k), "precision");
      } catch (const ResourceError&) {
        failed(radius, std::to_string(k), "cap");
      }
    }
  }
  return out.str();
}

RenewalResult cmd_renewal(const config::SystemConfig& cfg, const RunOptions& run, const RenewalOptions& opts) {
  run.validate();
  const auto prep = prepare(cfg);
  RenewalResult res;
  std::ostringstream csv, sum;
  sum << "seed " << run.seed << "\nt " << fmt(opts.t) << "\nsamples " << opts.samples << "\n";

  if (opts.psi_only) {
    auto wc = renewal::walk_config(prep.system, cfg.weights);
    auto psi = wc.psi_values();
    double width = opts.bin_width;
    if (width <= 0) {
      auto lat = group::log_lattice_detect(
          [&] {
            std::vector<double> r;
            for (const auto& m : prep.system.maps()) r.push_back(m.ratio);
            return r;
          }(),
          run.denom_bound);
      width = lat.kind == group::PsiImage::Kind::lattice ? lat.beta
                                                         : *std::max_element(psi.begin(), psi.end()) / 10;
    }
    auto over = renewal::simulate_psi_overshoots(wc, opts.t, opts.samples, run.seed);
    auto dens = renewal::psi_marginal_density(wc);
    res.tv = renewal::psi_marginal_tv(over, dens, width);
    csv << "bin_lo,bin_hi,empirical,theoretical\n";
    const double top = dens.back().to;
    const std::size_t bins = static_cast<std::size_t>(std::ceil(top / width - 1e-9));
    std::vector<double> emp(bins, 0);
    for (double x : over) emp[std::min(bins - 1, static_cast<std::size_t>(std::floor(x / width + 1e-9)))] += 1;
    for (double& e : emp) e /= static_cast<double>(over.size());
    for (std::size_t b = 0; b < bins; ++b) {
      double lo = b * width, hi = lo + width, th = 0;
      for (const auto& p : dens) th += std::max(0.0, std::min(hi, p.to) - std::max(lo, p.from)) * p.density;
      csv << fmt(lo) << "," << fmt(hi) << "," << fmt(emp[b]) << "," << fmt(th) << "\n";
    }
    sum << "mode psi-marginal\nbin_width " << fmt(width) << "\ntv " << fmt(res.tv) << "\n";
    res.csv = csv.str();
    res.summary = sum.str();
    return res;
  }

  auto disc = group::discreteness_report(prep.system, run.denom_bound, run.max_closure);
  if (!disc.discrete())
    throw ContractError("the group is not certified discrete; rerun with --psi-only for the psi-marginal comparison");
  auto cert1 = group::check_condition_one(prep.system, disc, run.generator.value_or(0));
  if (!cert1.holds) throw ContractError("condition one fails for the selected generator");
  auto wc = renewal::discrete_walk_config(prep.system, cfg.weights, cert1);
  auto samples = renewal::simulate_first_hits(wc, opts.t, opts.samples, run.seed);
  auto nu = renewal::theoretical_nu(wc);
  res.tv = renewal::tv_distance(samples, nu);
  res.kernel_tv = renewal::kernel_marginal_tv(samples, nu);

  std::map<std::pair<int, int>, std::size_t> count;
  for (const auto& a : nu.atoms) count[{a.kernel_index, a.level}] = 0;
  for (const auto& s : samples) ++count[{s.kernel_index, s.level}];
  csv << "kernel_index,level,empirical,theoretical\n";
  for (const auto& [key, c] : count)
    csv << key.first << "," << key.second << "," << fmt(static_cast<double>(c) / samples.size()) << ","
        << fmt(nu.mass(key.first, key.second)) << "\n";
  sum << "mode discrete\nbeta " << fmt(wc.beta) << "\nkernel_size " << wc.kernel.size() << "\ngenerator "
      << cert1.generator_index << "\n";
  matrix_block(sum, "h_rotation", wc.h->U, "");
  sum << "tv " << fmt(res.tv) << "\nkernel_tv " << fmt(res.kernel_tv) << "\n";
  res.csv = csv.str();
  res.summary = sum.str();
  return res;
}

config::SystemConfig cmd_construct(const ConstructOptions& opts, const RunOptions& run) {
  run.validate();
  const auto ctx = context_of(run);
  PrecisionScope scope(ctx.mantissa_bits);
  auto tuple = opts.salem ? algebra::pv_tuple_from_salem_products(opts.poly, ctx)
               : opts.roots.empty() ? algebra::AlgebraicTuple::outside_unit_circle(opts.poly, ctx)
                                    : algebra::AlgebraicTuple::from_root_indices(opts.poly, opts.roots, ctx);
  auto pv = algebra::is_pv_tuple(tuple, ctx);
  if (pv.status != algebra::PvStatus::pv)
    throw ContractError("tuple is not P.V. (" + algebra::to_string(pv.status) + "): " + pv.reason);
  auto built = ifs::construct_from_pv_tuple(tuple, ctx);
  config::SystemConfig cfg;
  cfg.name = opts.name;
  cfg.dimension = built.ifs.dimension();
  cfg.maps = built.ifs.maps();
  cfg.weights = ifs::ProbabilityVector::uniform(cfg.maps.size());
  cfg.pv_hints.push_back(tuple.defining_poly());
  return cfg;
}

}  // namespace selfsim::cli
