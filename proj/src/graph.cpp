#include "heterocut/graph.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "heterocut/kernels.hpp"
#include "heterocut/parallel.hpp"

namespace heterocut {

std::vector<int> Partition::class_sizes() const {
  std::vector<int> sizes(k, 0);
  for (const std::int32_t c : assign) ++sizes[c];
  return sizes;
}

std::vector<int> Partition::members(int c) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (assign[i] == c) out.push_back(i);
  return out;
}

double edge_weight(const Rotation& ri, const CommonLine& cij, const Rotation& rj,
                   const CommonLine& cji) {
  const Eigen::Vector3d u = ri.m * lift(cij);
  const Eigen::Vector3d v = rj.m * lift(cji);
  return (u - v).norm();
}

WeightGraph build_weight_graph(std::span<const Rotation> rotations,
                               const CommonLineTable& table) {
  const int n = table.size();
  if (static_cast<int>(rotations.size()) != n)
    throw std::invalid_argument("build_weight_graph: rotation count != table size");
  WeightGraph g(n);
  if (n == 0) return g;

  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> bx(nn), by(nn), bz(nn);
  const auto& ops = kernels::active_ops();

  // b[i*n+j] = R_i applied to the lifted line c_ij (zero when invalid).
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const Eigen::Matrix3d& m = rotations[i].m;
      const double u[3] = {m(0, 0), m(1, 0), m(2, 0)};
      const double v[3] = {m(0, 1), m(1, 1), m(2, 1)};
      const std::size_t base = static_cast<std::size_t>(i) * n;
      ops.lifted_line_row(table.cx_row(static_cast<int>(i)), table.cy_row(static_cast<int>(i)),
                          table.valid_row(static_cast<int>(i)), u, v, bx.data() + base,
                          by.data() + base, bz.data() + base, n);
    }
  });

  // Transposed copy so each weight row reads contiguous memory.
  std::vector<double> tx(nn), ty(nn), tz(nn);
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        tx[i * n + j] = bx[j * n + i];
        ty[i * n + j] = by[j * n + i];
        tz[i * n + j] = bz[j * n + i];
      }
  });

  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * n;
      ops.pair_distance3(bx.data() + base, by.data() + base, bz.data() + base,
                         tx.data() + base, ty.data() + base, tz.data() + base,
                         g.w.data() + base, n);
      g.w[base + i] = 0.0;
    }
  });
  return g;
}

double total_weight(const WeightGraph& g) {
  double total = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) total += g.at(i, j);
  return total;
}

namespace {

void check_sizes(const WeightGraph& g, const Partition& p) {
  if (p.size() != g.n) throw std::invalid_argument("partition size != graph size");
}

// Per-row cross-class mass, halved at the end so each unordered pair counts
// once. Row results are combined in index order regardless of threading.
double cross_mass(const WeightGraph& g, const Partition& p) {
  const auto& ops = kernels::active_ops();
  std::vector<double> row_cross(g.n, 0.0);
  parallel_for(0, g.n, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> sums(p.k);
    for (std::int64_t i = lo; i < hi; ++i) {
      ops.class_sums(g.row(static_cast<int>(i)), p.assign.data(), g.n, p.k, sums.data());
      double total = 0.0;
      for (int c = 0; c < p.k; ++c) total += sums[c];
      row_cross[i] = total - sums[p.assign[i]];
    }
  });
  double cross = 0.0;
  for (const double r : row_cross) cross += r;
  return cross / 2.0;
}

}  // namespace

double cut_weight(const WeightGraph& g, const Partition& p) {
  check_sizes(g, p);
  return cross_mass(g, p);
}

double within_class_weight(const WeightGraph& g, const Partition& p) {
  check_sizes(g, p);
  double within = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (p.assign[i] == p.assign[j]) within += g.at(i, j);
  return within;
}

double class_objective(std::span<const Rotation> rotations, std::span<const int> members,
                       const CommonLineTable& table) {
  double total = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const int i = members[a], j = members[b];
      if (!table.valid(i, j)) continue;
      total += edge_weight(rotations[i], table.line(i, j), rotations[j], table.line(j, i));
    }
  }
  return total;
}

double objective_F(std::span<const Rotation> rotations, const Partition& p,
                   const CommonLineTable& table) {
  if (p.size() != table.size() || static_cast<int>(rotations.size()) != table.size())
    throw std::invalid_argument("objective_F: size mismatch");
  double total = 0.0;
  for (int c = 0; c < p.k; ++c) {
    const std::vector<int> idx = p.members(c);
    total += class_objective(rotations, idx, table);
  }
  return total;
}

void save_weight_graph_csv(const WeightGraph& g, std::ostream& out) {
  char buf[40];
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", g.at(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

WeightGraph load_weight_graph_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  WeightGraph g(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw std::runtime_error("weight graph CSV is not square");
    for (int j = 0; j < n; ++j) g.at(i, j) = rows[i][j];
  }
  return g;
}

void save_weight_graph_binary(const WeightGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(g.n);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(g.w.data()),
            static_cast<std::streamsize>(g.w.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

WeightGraph load_weight_graph_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  WeightGraph g(static_cast<int>(n));
  in.read(reinterpret_cast<char*>(g.w.data()),
          static_cast<std::streamsize>(g.w.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated weight graph file: " + path);
  return g;
}

}  // namespace heterocut
