#include <algorithm>
#include <cmath>
#include <set>

#include "figcap/analysis.hpp"
#include "figcap/error.hpp"

namespace figcap {
namespace {

// figure_id -> record, rejecting a second ranking of the same figure.
std::map<std::string, const RankingRecord*> by_figure(
    std::span<const RankingRecord> rankings) {
  std::map<std::string, const RankingRecord*> out;
  for (const RankingRecord& r : rankings) {
    if (!out.emplace(r.figure_id, &r).second) {
      throw Error("annotator '" + r.annotator_id + "' ranked figure '" +
                  r.figure_id + "' twice");
    }
  }
  return out;
}

// Position (1 = best) of each system, systems ordered by id.
std::vector<double> rank_vector(const RankingRecord& r) {
  std::vector<std::pair<std::string, double>> positions;
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    positions.emplace_back(r.ranking[i], static_cast<double>(i + 1));
  }
  std::sort(positions.begin(), positions.end());
  std::vector<double> out;
  for (const auto& [system, pos] : positions) out.push_back(pos);
  return out;
}

std::set<std::string> systems_of(const RankingRecord& r) {
  std::set<std::string> s(r.ranking.begin(), r.ranking.end());
  if (s.size() != r.ranking.size()) {
    throw Error("ranking of figure '" + r.figure_id + "' repeats a system");
  }
  return s;
}

}  // namespace

Agreement rank_agreement(std::span<const RankingRecord> first,
                         std::span<const RankingRecord> second,
                         AgreementPooling pooling) {
  const auto a = by_figure(first);
  const auto b = by_figure(second);
  std::vector<double> pooled_a, pooled_b;
  double tau_sum = 0, rho_sum = 0;
  Agreement out;
  for (const auto& [figure_id, ra] : a) {
    auto it = b.find(figure_id);
    if (it == b.end()) continue;
    const RankingRecord* rb = it->second;
    if (systems_of(*ra) != systems_of(*rb)) {
      throw Error("rankings of figure '" + figure_id +
                  "' cover different systems");
    }
    const auto va = rank_vector(*ra);
    const auto vb = rank_vector(*rb);
    if (pooling == AgreementPooling::kPooled) {
      pooled_a.insert(pooled_a.end(), va.begin(), va.end());
      pooled_b.insert(pooled_b.end(), vb.begin(), vb.end());
    } else {
      tau_sum += kendall_tau_b(va, vb);
      rho_sum += spearman_rho(va, vb);
    }
    ++out.shared_figures;
  }
  if (out.shared_figures == 0) {
    throw Error("the two annotators share no ranked figure");
  }
  if (pooling == AgreementPooling::kPooled) {
    out.kendall_tau = kendall_tau_b(pooled_a, pooled_b);
    out.spearman_rho = spearman_rho(pooled_a, pooled_b);
  } else {
    out.kendall_tau = tau_sum / static_cast<double>(out.shared_figures);
    out.spearman_rho = rho_sum / static_cast<double>(out.shared_figures);
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> mean_ranks(
    std::span<const RankingRecord> rankings) {
  std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
  for (const RankingRecord& r : rankings) {
    systems_of(r);
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      auto& cell = acc[r.ranking[i]][r.figure_id];
      cell.first += static_cast<double>(i + 1);
      ++cell.second;
    }
  }
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& [system, figures] : acc) {
    for (const auto& [figure, cell] : figures) {
      out[system][figure] = cell.first / cell.second;
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> votes_per_figure(
    std::span<const VoteRecord> votes) {
  std::set<std::string> systems, figures;
  for (const VoteRecord& v : votes) {
    systems.insert(v.worst_system_id);
    figures.insert(v.figure_id);
  }
  std::map<std::string, std::map<std::string, double>> out;
  for (const std::string& s : systems) {
    for (const std::string& f : figures) out[s][f] = 0;
  }
  for (const VoteRecord& v : votes) out[v.worst_system_id][v.figure_id] += 1;
  return out;
}

std::vector<VoteTallyRow> worst_vote_tally(std::span<const VoteRecord> votes) {
  const auto counts = votes_per_figure(votes);
  std::map<std::string, double> top;  // figure -> highest vote count
  for (const auto& [system, figures] : counts) {
    for (const auto& [figure, n] : figures) top[figure] = std::max(top[figure], n);
  }
  std::vector<VoteTallyRow> rows;
  for (const auto& [system, figures] : counts) {
    VoteTallyRow row{system, 0, 0};
    double total = 0;
    for (const auto& [figure, n] : figures) {
      total += n;
      if (n > 0 && n == top[figure]) ++row.majority_count;
    }
    row.mean_votes = figures.empty() ? 0 : total / static_cast<double>(figures.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace figcap
