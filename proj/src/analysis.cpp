#include "esrlab/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include <absl/container/flat_hash_set.h>

#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/hash.hpp"
#include "esrlab/simplify.hpp"
#include "esrlab/text.hpp"

namespace esr {

EcdfAxis parse_axis(std::string_view s) {
  if (s == "visited") return EcdfAxis::Visited;
  if (s == "fevals") return EcdfAxis::Fevals;
  throw ConfigError("axis must be visited or fevals, got '" + std::string(s) + "'");
}

double Ecdf::at(long x) const {
  double y = 0.0;
  for (const auto& [px, py] : curve) {
    if (px > x) break;
    y = py;
  }
  return y;
}

std::vector<long> first_success(const RunLog& log, const std::vector<double>& thresholds, EcdfAxis axis) {
  std::vector<long> first(thresholds.size(), -1);
  std::size_t open = thresholds.size();
  long visited = 0;
  for (const LogRecord& r : log.records) {
    ++visited;
    if (open == 0) break;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (first[t] >= 0 || !(r.fitness <= thresholds[t])) continue;
      first[t] = axis == EcdfAxis::Visited ? visited : r.fevals;
      --open;
    }
  }
  return first;
}

std::vector<Ecdf> make_ecdfs(const std::vector<double>& thresholds, const std::vector<std::vector<long>>& per_run) {
  std::vector<Ecdf> out;
  const double runs = static_cast<double>(per_run.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    Ecdf e;
    e.threshold = thresholds[t];
    std::vector<long> hits;
    for (const auto& run : per_run) {
      e.first.push_back(run[t]);
      if (run[t] >= 0) hits.push_back(run[t]);
    }
    std::sort(hits.begin(), hits.end());
    for (std::size_t k = 0; k < hits.size(); ++k) {
      const double y = static_cast<double>(k + 1) / runs;
      if (!e.curve.empty() && e.curve.back().first == hits[k]) {
        e.curve.back().second = y;
      } else {
        e.curve.emplace_back(hits[k], y);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Ecdf> ecdf(const std::vector<RunLog>& logs, const std::vector<double>& thresholds, EcdfAxis axis) {
  if (logs.empty()) throw ConfigError("ecdf needs at least one log");
  std::vector<std::vector<long>> per_run;
  per_run.reserve(logs.size());
  for (const RunLog& l : logs) per_run.push_back(first_success(l, thresholds, axis));
  return make_ecdfs(thresholds, per_run);
}

void write_ecdf_tsv(std::ostream& out, const std::vector<Ecdf>& curves) {
  out << "threshold\tx\ty\n";
  for (const Ecdf& e : curves) {
    // Start at zero so the step is drawn from the origin.
    out << format_double(e.threshold) << "\t0\t" << format_double(e.at(0)) << '\n';
    for (const auto& [x, y] : e.curve) {
      if (x == 0) continue;
      out << format_double(e.threshold) << '\t' << x << '\t' << format_double(y) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

bool ConstantOracle::operator()(const LogRecord& r) {
  if (!r.has_sem) return false;
  auto [it, inserted] = cache_.try_emplace(r.sem_hash, false);
  if (inserted) it->second = simplifies_to_constant(parse(r.expr), kSearchEqsat);
  return it->second;
}

namespace {

// Key for "distinct expression": structure plus fitted values rounded to 1e-12.
std::uint64_t expr_key(const LogRecord& r) {
  std::uint64_t h = r.struct_hash;
  for (double t : r.theta) {
    const double q = std::isfinite(t) ? std::round(t * 1e12) : t;
    h = hash_combine(h, std::bit_cast<std::uint64_t>(q == 0.0 ? 0.0 : q));
  }
  return h;
}

double ratio(std::size_t a, long b) { return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

}  // namespace

DupStats duplicate_stats(const RunLog& log, const Catalog* catalog) {
  ConstantOracle oracle;
  return duplicate_stats(log, catalog, oracle);
}

DupStats duplicate_stats(const RunLog& log, const Catalog* catalog, ConstantOracle& oracle) {
  DupStats s;
  absl::flat_hash_set<std::uint64_t> ge, gs, gm, ce, cs, cm;
  std::size_t gconst = 0, cconst = 0;
  long gcount = 0, ccount = 0;
  int gen = log.records.empty() ? 0 : log.records.front().gen;

  auto flush = [&] {
    DupRow row;
    row.gen = gen;
    row.records = gcount;
    row.expr = ratio(ge.size(), gcount);
    row.structures = ratio(gs.size(), gcount);
    row.simplified = ratio(gm.size(), gcount);
    row.constant = ratio(gconst, gcount);
    row.cum_expr = ratio(ce.size(), ccount);
    row.cum_structures = ratio(cs.size(), ccount);
    row.cum_simplified = ratio(cm.size(), ccount);
    row.cum_constant = ratio(cconst, ccount);
    s.rows.push_back(row);
    ge.clear();
    gs.clear();
    gm.clear();
    gconst = 0;
    gcount = 0;
  };

  for (const LogRecord& r : log.records) {
    if (r.gen != gen) {
      flush();
      gen = r.gen;
    }
    ++s.visited;
    if (!r.has_sem) {
      ++s.over_length;
      continue;
    }
    ++gcount;
    ++ccount;
    const std::uint64_t k = expr_key(r);
    ge.insert(k);
    ce.insert(k);
    gs.insert(r.struct_hash);
    cs.insert(r.struct_hash);
    gm.insert(r.sem_hash);
    cm.insert(r.sem_hash);
    if (oracle(r)) {
      ++gconst;
      ++cconst;
    }
  }
  if (!log.records.empty()) flush();

  if (catalog != nullptr && catalog->size() > 0) {
    std::size_t hit = 0;
    for (std::uint64_t h : cm) hit += catalog->lookup(h) != nullptr ? 1 : 0;
    s.coverage = static_cast<double>(hit) / static_cast<double>(catalog->size());
  }
  return s;
}

void write_dups_tsv(std::ostream& out, const DupStats& s) {
  out << "# visited=" << s.visited << " over_length=" << s.over_length;
  if (s.coverage) out << " coverage=" << format_double(*s.coverage);
  out << '\n';
  out << "gen\trecords\texpr\tstructures\tsimplified\tconstant\tcum_expr\tcum_structures\tcum_simplified\tcum_constant\n";
  for (const DupRow& r : s.rows) {
    out << r.gen << '\t' << r.records;
    for (double v : {r.expr, r.structures, r.simplified, r.constant, r.cum_expr, r.cum_structures, r.cum_simplified,
                     r.cum_constant}) {
      out << '\t' << format_double(v);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nan("");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return w == 0.0 ? sorted[lo] : sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

FitnessDistribution fitness_distribution(const std::vector<FitRecord>& results, const std::vector<Baseline>& baselines,
                                         std::size_t top_k, const std::vector<double>& probs) {
  FitnessDistribution d;
  d.entries = static_cast<long>(results.size());
  std::vector<double> v;
  v.reserve(results.size());
  for (const FitRecord& r : results) {
    if (std::isfinite(r.objective)) v.push_back(r.objective);
  }
  d.finite = static_cast<long>(v.size());
  std::sort(v.begin(), v.end());
  for (double p : probs) d.quantiles.emplace_back(p, quantile_sorted(v, p));
  for (const Baseline& b : baselines) {
    const auto n = std::lower_bound(v.begin(), v.end(), b.objective) - v.begin();
    d.better.emplace_back(b, d.entries > 0 ? static_cast<double>(n) / static_cast<double>(d.entries) : 0.0);
  }
  std::vector<const FitRecord*> order;
  for (const FitRecord& r : results) {
    if (std::isfinite(r.objective)) order.push_back(&r);
  }
  const std::size_t k = std::min(top_k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [](const FitRecord* a, const FitRecord* b) {
                      return a->objective < b->objective || (a->objective == b->objective && a->hash < b->hash);
                    });
  for (std::size_t i = 0; i < k; ++i) d.top.push_back(*order[i]);
  return d;
}

void write_dist_tsv(std::ostream& out, const FitnessDistribution& d, const Catalog* catalog) {
  out << "# entries=" << d.entries << " finite=" << d.finite << '\n';
  out << "section\tkey\tvalue\tdetail\n";
  for (const auto& [p, q] : d.quantiles) out << "quantile\t" << format_double(p) << '\t' << format_double(q) << "\t\n";
  for (const auto& [b, f] : d.better) {
    out << "better\t" << b.label << '\t' << format_double(f) << '\t' << format_double(b.objective) << '\n';
  }
  for (std::size_t i = 0; i < d.top.size(); ++i) {
    const FitRecord& r = d.top[i];
    std::string expr = format_hash(r.hash);
    if (catalog != nullptr) {
      if (const CatalogEntry* e = catalog->lookup(r.hash)) expr = render(e->expr);
    }
    out << "top\t" << (i + 1) << '\t' << format_double(r.objective) << '\t' << expr << " [" << join_doubles(r.theta)
        << "]\n";
  }
}

}  // namespace esr
