#include "pts/simplex.hpp"

namespace pts {

namespace {

DeltaRational add_scaled(const DeltaRational& a, const DeltaRational& b, const Rational& s) {
  return {a.c + b.c * s, a.k + b.k * s};
}

}  // namespace

int Simplex::add_var() {
  int v = static_cast<int>(values_.size());
  lower_.emplace_back();
  upper_.emplace_back();
  values_.push_back({0, 0});
  basic_.push_back(false);
  row_.emplace_back();
  col_.emplace_back();
  return v;
}

void Simplex::set_lower(int v, const Rational& bound, bool strict) {
  DeltaRational b{bound, strict ? 1 : 0};
  if (lower_[v] && b <= *lower_[v]) return;
  lower_[v] = b;
  if (upper_[v] && *upper_[v] < b) conflict_ = true;
  if (!basic_[v] && values_[v] < b) update(v, b);
}

void Simplex::set_upper(int v, const Rational& bound, bool strict) {
  DeltaRational b{bound, strict ? -1 : 0};
  if (upper_[v] && *upper_[v] <= b) return;
  upper_[v] = b;
  if (lower_[v] && b < *lower_[v]) conflict_ = true;
  if (!basic_[v] && values_[v] > b) update(v, b);
}

int Simplex::add_row(const std::map<int, Rational>& expr) {
  int b = add_var();
  std::map<int, Rational> r;
  auto add = [&](int v, const Rational& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = r.try_emplace(v, c);
    if (!fresh) {
      it->second += c;
      if (is_zero(it->second)) r.erase(it);
    }
  };
  for (const auto& [v, c] : expr) {
    if (basic_[v])
      for (const auto& [u, d] : row_[v]) add(u, c * d);
    else
      add(v, c);
  }
  DeltaRational val{0, 0};
  for (const auto& [v, c] : r) {
    val = add_scaled(val, values_[v], c);
    col_[v].insert(b);
  }
  values_[b] = val;
  basic_[b] = true;
  row_[b] = std::move(r);
  basics_.insert(b);
  return b;
}

void Simplex::update(int j, const DeltaRational& v) {
  DeltaRational diff{v.c - values_[j].c, v.k - values_[j].k};
  for (int b : col_[j]) values_[b] = add_scaled(values_[b], diff, row_[b].at(j));
  values_[j] = v;
}

void Simplex::pivot_and_update(int i, int j, const DeltaRational& v) {
  ++pivots_;
  const Rational a_ij = row_[i].at(j);
  Rational theta_c = (v.c - values_[i].c) / a_ij, theta_k = (v.k - values_[i].k) / a_ij;
  DeltaRational theta{theta_c, theta_k};
  values_[i] = v;
  values_[j] = add_scaled(values_[j], theta, 1);
  for (int b : col_[j])
    if (b != i) values_[b] = add_scaled(values_[b], theta, row_[b].at(j));

  // Row i: x_i = a_ij x_j + rest  =>  x_j = x_i / a_ij - rest / a_ij.
  std::map<int, Rational> rj;
  Rational inv = Rational(1) / a_ij;
  for (const auto& [k, c] : row_[i]) {
    col_[k].erase(i);
    if (k != j) rj[k] = -c * inv;
  }
  rj[i] = inv;
  row_[i].clear();
  basic_[i] = false;
  basics_.erase(i);

  std::set<int> users = col_[j];
  col_[j].clear();
  for (int b : users) {
    auto& rb = row_[b];
    Rational c = rb.at(j);
    rb.erase(j);
    for (const auto& [k, d] : rj) {
      auto [it, fresh] = rb.try_emplace(k, c * d);
      if (fresh) {
        col_[k].insert(b);
      } else {
        it->second += c * d;
        if (is_zero(it->second)) {
          rb.erase(it);
          col_[k].erase(b);
        }
      }
    }
  }
  for (const auto& [k, d] : rj) col_[k].insert(j);
  row_[j] = std::move(rj);
  basic_[j] = true;
  basics_.insert(j);
}

bool Simplex::check() {
  if (conflict_) return false;
  for (;;) {
    int i = -1;
    for (int b : basics_)
      if (below_lower(b) || above_upper(b)) {
        i = b;
        break;
      }
    if (i < 0) return true;
    bool raise = below_lower(i);
    int j = -1;
    for (const auto& [k, a] : row_[i]) {
      bool up_ok = !upper_[k] || values_[k] < *upper_[k];
      bool down_ok = !lower_[k] || values_[k] > *lower_[k];
      bool positive = sgn(a) > 0;
      if (raise ? (positive ? up_ok : down_ok) : (positive ? down_ok : up_ok)) {
        j = k;
        break;
      }
    }
    if (j < 0) return false;
    pivot_and_update(i, j, raise ? *lower_[i] : *upper_[i]);
  }
}

std::vector<Rational> Simplex::model() const {
  Rational delta = 1;
  auto limit = [&](const DeltaRational& lo, const DeltaRational& hi) {
    // Need lo.c + lo.k d <= hi.c + hi.k d.
    if (lo.c < hi.c && lo.k > hi.k) {
      Rational d = (hi.c - lo.c) / (lo.k - hi.k);
      if (d < delta) delta = d;
    }
  };
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (lower_[v]) limit(*lower_[v], values_[v]);
    if (upper_[v]) limit(values_[v], *upper_[v]);
  }
  std::vector<Rational> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(v.c + v.k * delta);
  return out;
}

}  // namespace pts
