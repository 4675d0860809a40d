#pragma once

#include "enl/hedging.hpp"
#include "enl/models.hpp"

namespace fx {

using Q = enl::Rational;
using enl::INF;

// Four equally likely paths over two coin flips, tau = (1, 2, 2, INF).
inline enl::Space<Q> w4_space() {
    return enl::build_space<Q>({Q(1, 4), Q(1, 4), Q(1, 4), Q(1, 4)},
                               {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}}, 2);
}
inline enl::RandomTime w4_tau() { return {1, 2, 2, INF}; }
inline enl::Bundle<Q> w4() { return enlarge(w4_space(), w4_tau()); }

// Three fair flips (8 paths), used with marks to separate G_tau from F_tau.
inline enl::Space<Q> three_flips() {
    std::vector<std::vector<int>> labels(4, std::vector<int>(8));
    for (int p = 0; p < 8; ++p)
        for (int t = 0; t <= 3; ++t) labels[t][p] = p >> (3 - t);
    enl::Space<Q> s;
    s.weights.assign(8, Q(1, 8));
    s.F = enl::Filtration::from_labels(8, 3, labels);
    return s;
}

template <class T>
enl::Process<T> constant(int n, int h, const T& c) {
    return enl::constant_process<T>(n, h, std::vector<T>(n, c));
}

template <class T>
enl::Process<T> from_rows(const std::vector<std::vector<T>>& rows) {
    enl::Process<T> x(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()) - 1, enl::Klass::Adapted);
    for (int p = 0; p < x.n; ++p)
        for (int t = 0; t <= x.h; ++t) x(p, t) = rows[p][t];
    return x;
}

// W4 times a stock that moves only in the first period: u = 2, d = 1/2, q = 1/3.
inline enl::Market<Q> w4_with_stock() {
    auto w = w4_space();
    std::vector<std::vector<int>> labels(3, std::vector<int>(2));
    labels[1] = {0, 1};
    labels[2] = {0, 1};
    enl::Space<Q> st;
    st.weights = {Q(1, 3), Q(2, 3)};
    st.F = enl::Filtration::from_labels(2, 2, labels);
    auto sp = enl::product_space(w, st);
    enl::RandomTime tau;
    enl::Process<Q> S(8, 2, enl::Klass::Adapted);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) {
            tau.push_back(w4_tau()[i]);
            int p = i * 2 + j;
            S(p, 0) = Q(1);
            S(p, 1) = S(p, 2) = j == 0 ? Q(2) : Q(1, 2);
        }
    return enl::Market<Q>{enlarge(sp, tau), {S}};
}

template <class T>
T dmax(const enl::Process<T>& x) {
    T m(0);
    for (const auto& v : x.v) m = std::max(m, enl::Field<T>::abs(v));
    return m;
}

}  // namespace fx
