#include "clwe/structsim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <set>

#include "clwe/kernels.hpp"

namespace clwe {

std::vector<int32_t> NeighborGraph::degrees() const {
  std::vector<int32_t> deg(n, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

NeighborGraph knn_graph(const EmbeddingMatrix& emb, int32_t top_m, int32_t k) {
  if (top_m > emb.rows()) {
    throw CutoffTooLarge("knn_graph top_m exceeds vocabulary");
  }
  if (k < 1 || k >= top_m) {
    throw InvalidK("need 1 <= k < top_m, got k=" + std::to_string(k) +
                   " top_m=" + std::to_string(top_m));
  }
  EmbeddingMatrix top = slice_rows(emb, top_m);
  length_normalize_rows(top);

  NeighborGraph g;
  g.n = top_m;
  g.k = k;
  std::set<std::pair<int32_t, int32_t>> edge_set;
  constexpr int32_t kBlock = 128;
  std::vector<float> sims(static_cast<size_t>(kBlock) * top_m);
  std::vector<int32_t> order(top_m);
  for (int32_t start = 0; start < top_m; start += kBlock) {
    const int32_t rows = std::min(kBlock, top_m - start);
    kernels::matmul_nt(top.row(start), rows, top.data.data(), top_m, top.dim,
                       sims.data());
    for (int32_t r = 0; r < rows; ++r) {
      const int32_t i = start + r;
      const float* row = sims.data() + static_cast<size_t>(r) * top_m;
      int32_t filled = 0;
      for (int32_t j = 0; j < top_m; ++j) {
        if (j != i) order[filled++] = j;
      }
      auto nearer = [&](int32_t a, int32_t b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return a < b;
      };
      std::partial_sort(order.begin(), order.begin() + k,
                        order.begin() + filled, nearer);
      for (int32_t e = 0; e < k; ++e) {
        const int32_t j = order[e];
        edge_set.emplace(std::min(i, j), std::max(i, j));
      }
    }
  }
  g.edges.assign(edge_set.begin(), edge_set.end());
  return g;
}

namespace {

void fill_mass_k(SpectralSummary& summary, const EigSimOptions& options) {
  const auto& ev = summary.eigenvalues;
  double total = 0.0;
  for (double v : ev) total += v;
  if (total <= 0.0) {
    // Empty graph: all-zero spectrum, every prefix holds the full mass.
    summary.k_mass = 1;
    summary.mass_fraction = 1.0;
    return;
  }
  double cum = 0.0;
  int32_t k_at_or_above = static_cast<int32_t>(ev.size());
  double frac_at = 1.0;
  int32_t last_below = 1;
  double frac_below = ev.empty() ? 1.0 : ev[0] / total;
  for (size_t i = 0; i < ev.size(); ++i) {
    cum += ev[i];
    const double frac = cum / total;
    if (frac >= options.mass_threshold) {
      k_at_or_above = static_cast<int32_t>(i + 1);
      frac_at = frac;
      break;
    }
    last_below = static_cast<int32_t>(i + 1);
    frac_below = frac;
  }
  if (options.literal_below) {
    summary.k_mass = last_below;
    summary.mass_fraction = frac_below;
  } else {
    summary.k_mass = k_at_or_above;
    summary.mass_fraction = frac_at;
  }
}

}  // namespace

SpectralSummary laplacian_spectrum(const NeighborGraph& g,
                                   const EigSimOptions& options) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [i, j] : g.edges) {
    lap(i, j) -= 1.0;
    lap(j, i) -= 1.0;
    lap(i, i) += 1.0;
    lap(j, j) += 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) {
    throw SolverError("Laplacian eigendecomposition failed");
  }
  SpectralSummary summary;
  summary.eigenvalues.resize(g.n);
  const auto& ev = solver.eigenvalues();  // ascending
  for (int32_t i = 0; i < g.n; ++i) {
    double v = ev(g.n - 1 - i);
    if (v < 0.0) {
      if (v < -1e-9) throw SolverError("negative Laplacian eigenvalue");
      v = 0.0;
    }
    summary.eigenvalues[i] = v;
  }
  fill_mass_k(summary, options);
  return summary;
}

EigSimReport eigenvector_similarity(const EmbeddingMatrix& x,
                                    const EmbeddingMatrix& y, int32_t top_m,
                                    int32_t k_nn,
                                    const EigSimOptions& options) {
  const SpectralSummary sx = laplacian_spectrum(knn_graph(x, top_m, k_nn), options);
  const SpectralSummary sy = laplacian_spectrum(knn_graph(y, top_m, k_nn), options);
  EigSimReport report;
  report.k_x = sx.k_mass;
  report.k_y = sy.k_mass;
  report.k_used = options.combine_max ? std::max(sx.k_mass, sy.k_mass)
                                      : std::min(sx.k_mass, sy.k_mass);
  double total = 0.0;
  for (int32_t i = 0; i < report.k_used; ++i) {
    const double diff = sx.eigenvalues[i] - sy.eigenvalues[i];
    total += diff * diff;
    report.lambda_top_x.push_back(sx.eigenvalues[i]);
    report.lambda_top_y.push_back(sy.eigenvalues[i]);
  }
  report.value = total;
  return report;
}

}  // namespace clwe
