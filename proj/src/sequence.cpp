#include "anisotl/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace anisotl {

coefficient_sequence coefficient_sequence::from_atoms(int dim, std::vector<seq_atom> atoms) {
    coefficient_sequence c;
    c.explicit_ = true;
    c.dim_ = dim;
    for (auto& a : atoms) {
        if (static_cast<int>(a.k.size()) != dim)
            throw std::invalid_argument("atom index dimension mismatch");
        a.value = std::abs(a.value);
        if (a.value == 0) continue;
        auto& sd = c.by_scale_[a.j];
        auto [it, fresh] = sd.values.emplace(a.k, a.value);
        if (!fresh) it->second += a.value; // duplicate key: moduli add
    }
    for (auto& [j, sd] : c.by_scale_) {
        c.scales_.push_back(j);
        sd.lo = kvec(dim, 0);
        sd.hi = kvec(dim, 0);
        bool first = true;
        for (auto& [k, v] : sd.values) {
            sd.max_abs = std::max(sd.max_abs, v);
            for (int i = 0; i < dim; ++i) {
                if (first) {
                    sd.lo[i] = k[i];
                    sd.hi[i] = k[i];
                } else {
                    sd.lo[i] = std::min(sd.lo[i], k[i]);
                    sd.hi[i] = std::max(sd.hi[i], k[i]);
                }
            }
            first = false;
            c.atoms_.push_back({j, k, v});
        }
    }
    std::sort(c.scales_.begin(), c.scales_.end());
    std::sort(c.atoms_.begin(), c.atoms_.end(), [](const seq_atom& a, const seq_atom& b) {
        return a.j != b.j ? a.j < b.j : a.k < b.k;
    });
    return c;
}

coefficient_sequence coefficient_sequence::implicit(int dim,
                                                    std::vector<implicit_scale> scales) {
    coefficient_sequence c;
    c.explicit_ = false;
    c.dim_ = dim;
    for (auto& s : scales) {
        if (static_cast<int>(s.k_lo.size()) != dim || static_cast<int>(s.k_hi.size()) != dim)
            throw std::invalid_argument("implicit scale box dimension mismatch");
        c.scales_.push_back(s.j);
    }
    c.imp_ = std::move(scales);
    std::sort(c.scales_.begin(), c.scales_.end());
    std::sort(c.imp_.begin(), c.imp_.end(),
              [](const implicit_scale& a, const implicit_scale& b) { return a.j < b.j; });
    return c;
}

bool coefficient_sequence::empty() const { return scales_.empty(); }

long coefficient_sequence::scale_min() const {
    if (scales_.empty()) throw std::logic_error("empty sequence has no scales");
    return scales_.front();
}

long coefficient_sequence::scale_max() const {
    if (scales_.empty()) throw std::logic_error("empty sequence has no scales");
    return scales_.back();
}

const coefficient_sequence::implicit_scale* coefficient_sequence::find_implicit(long j) const {
    for (const auto& s : imp_)
        if (s.j == j) return &s;
    return nullptr;
}

double coefficient_sequence::value_at(long j, const kvec& k) const {
    if (explicit_) {
        auto it = by_scale_.find(j);
        if (it == by_scale_.end()) return 0;
        auto v = it->second.values.find(k);
        return v == it->second.values.end() ? 0.0 : v->second;
    }
    const implicit_scale* s = find_implicit(j);
    if (!s) return 0;
    for (int i = 0; i < dim_; ++i)
        if (k[i] < s->k_lo[i] || k[i] > s->k_hi[i]) return 0;
    if (!s->contains(k)) return 0;
    return std::abs(s->coeff(k));
}

double coefficient_sequence::max_abs(long j) const {
    if (explicit_) {
        auto it = by_scale_.find(j);
        return it == by_scale_.end() ? 0.0 : it->second.max_abs;
    }
    const implicit_scale* s = find_implicit(j);
    return s ? s->max_abs : 0.0;
}

void coefficient_sequence::scale_k_box(long j, kvec& lo, kvec& hi) const {
    if (explicit_) {
        auto it = by_scale_.find(j);
        if (it == by_scale_.end()) throw std::invalid_argument("no such scale");
        lo = it->second.lo;
        hi = it->second.hi;
        return;
    }
    const implicit_scale* s = find_implicit(j);
    if (!s) throw std::invalid_argument("no such scale");
    lo = s->k_lo;
    hi = s->k_hi;
}

double coefficient_sequence::support_count_bound(long j) const {
    if (explicit_) {
        auto it = by_scale_.find(j);
        return it == by_scale_.end() ? 0.0 : static_cast<double>(it->second.values.size());
    }
    const implicit_scale* s = find_implicit(j);
    if (!s) return 0;
    if (s->count_hint) return *s->count_hint;
    double n = 1;
    for (int i = 0; i < dim_; ++i) n *= static_cast<double>(s->k_hi[i] - s->k_lo[i] + 1);
    return n;
}

const std::vector<seq_atom>& coefficient_sequence::atoms() const {
    if (!explicit_) throw std::invalid_argument("implicit sequence has no atom list");
    return atoms_;
}

const std::vector<coefficient_sequence::implicit_scale>&
coefficient_sequence::implicit_scales() const {
    if (explicit_) throw std::invalid_argument("explicit sequence has no implicit scales");
    return imp_;
}

coefficient_sequence coefficient_sequence::scaled(double factor) const {
    if (!explicit_) throw std::invalid_argument("scaled() needs an explicit sequence");
    std::vector<seq_atom> out = atoms_;
    for (auto& a : out) a.value *= std::abs(factor);
    return from_atoms(dim_, std::move(out));
}

coefficient_sequence sum_sequences(const coefficient_sequence& a, const coefficient_sequence& b) {
    if (!a.explicit_ || !b.explicit_)
        throw std::invalid_argument("sum_sequences needs explicit sequences");
    if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
    std::vector<seq_atom> atoms = a.atoms_;
    atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
    return coefficient_sequence::from_atoms(a.dim_, std::move(atoms));
}

coefficient_sequence materialize(const coefficient_sequence& c, size_t max_atoms) {
    if (c.explicit_) return c;
    std::vector<seq_atom> atoms;
    for (const auto& sc : c.imp_) {
        kvec k = sc.k_lo;
        while (true) {
            if (sc.contains(k)) {
                double v = std::abs(sc.coeff(k));
                if (v > 0) {
                    atoms.push_back({sc.j, k, v});
                    if (atoms.size() > max_atoms)
                        throw std::length_error("implicit support exceeds max_atoms");
                }
            }
            int axis = 0;
            while (axis < c.dim_) {
                if (++k[axis] <= sc.k_hi[axis]) break;
                k[axis] = sc.k_lo[axis];
                ++axis;
            }
            if (axis == c.dim_) break;
        }
    }
    return coefficient_sequence::from_atoms(c.dim_, std::move(atoms));
}

} // namespace anisotl
