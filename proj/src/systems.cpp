#include "nid/systems.hpp"

#include "nid/random.hpp"

#include <stdexcept>
#include <string>

namespace nid {

namespace {

using Poly = SparsePolynomial<double>;

Poly linear_factor(std::size_t nvars, std::size_t var, double root)
{
    return Poly::variable(nvars, var) - Poly::constant(nvars, ComplexD(root));
}

} // namespace

PolySystem<double> cyclic(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("cyclic: n must be at least 1");
    std::vector<Poly> polys;
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<Term<double>> terms;
        for (std::size_t start = 0; start < n; ++start) {
            Exponents e(n, 0);
            for (std::size_t q = 0; q < j; ++q) e[(start + q) % n] = 1;
            terms.push_back({std::move(e), ComplexD(1.0)});
        }
        polys.emplace_back(n, std::move(terms));
    }
    polys.emplace_back(n, std::vector<Term<double>>{{Exponents(n, 1), ComplexD(1.0)}, {Exponents(n, 0), ComplexD(-1.0)}});
    return PolySystem<double>(n, std::move(polys));
}

PolySystem<double> demo_system()
{
    const std::size_t n = 4;
    auto f = [&](std::size_t var, double root) { return linear_factor(n, var, root); };
    std::vector<Poly> polys{
        f(0, 1) * f(0, 2) * f(0, 3) * f(0, 4),
        f(0, 1) * f(1, 1) * f(1, 2) * f(1, 3),
        f(0, 1) * f(0, 2) * f(2, 1) * f(2, 2),
        f(0, 1) * f(1, 1) * f(2, 1) * f(3, 1),
    };
    return PolySystem<double>(n, std::move(polys));
}

PolySystem<double> line_and_double_point()
{
    const std::size_t n = 2;
    Poly x2 = Poly::variable(n, 1);
    return PolySystem<double>(n, {linear_factor(n, 0, 1) * linear_factor(n, 0, 2), linear_factor(n, 0, 1) * x2 * x2});
}

PolySystem<double> SquaringRecord::apply(const PolySystem<double>& original) const
{
    const std::size_t n = original.nvars();
    switch (kind) {
    case Kind::already_square: return original;
    case Kind::added_hyperplanes: {
        std::vector<Poly> polys = original.polys();
        for (const auto& h : hyperplanes) {
            std::vector<Term<double>> terms{{Exponents(n, 0), h[0]}};
            for (std::size_t v = 0; v < n; ++v) {
                Exponents e(n, 0);
                e[v] = 1;
                terms.push_back({std::move(e), h[v + 1]});
            }
            polys.emplace_back(n, std::move(terms));
        }
        return PolySystem<double>(n, std::move(polys), original.names());
    }
    case Kind::added_slacks: {
        const std::size_t total = n + multipliers.size();
        std::vector<std::string> names = original.names();
        for (std::size_t s = 0; s < multipliers.size(); ++s) names.push_back("s" + std::to_string(s + 1));
        std::vector<Poly> polys;
        for (std::size_t i = 0; i < original.size(); ++i) {
            Poly p = original[i].extended(total);
            for (std::size_t s = 0; s < multipliers.size(); ++s)
                p = p + Poly::variable(total, n + s) * multipliers[s][i];
            polys.push_back(std::move(p));
        }
        return PolySystem<double>(total, std::move(polys), std::move(names));
    }
    }
    return original;
}

std::pair<PolySystem<double>, SquaringRecord> square_up(const PolySystem<double>& f, std::uint64_t seed)
{
    SquaringRecord rec;
    Rng rng = Rng(seed).split(Stream::squaring);
    const std::size_t m = f.size();
    const std::size_t n = f.nvars();
    if (m < n) {
        rec.kind = SquaringRecord::Kind::added_hyperplanes;
        for (std::size_t k = 0; k < n - m; ++k) {
            std::vector<ComplexD> h(n + 1);
            for (auto& c : h) c = rng.random_constant();
            rec.hyperplanes.push_back(std::move(h));
        }
    } else if (m > n) {
        rec.kind = SquaringRecord::Kind::added_slacks;
        for (std::size_t s = 0; s < m - n; ++s) {
            std::vector<ComplexD> mult(m);
            for (auto& c : mult) c = rng.random_constant();
            rec.multipliers.push_back(std::move(mult));
        }
    }
    return {rec.apply(f), rec};
}

EmbeddedSystem::EmbeddedSystem(PolySystem<double> base, std::vector<std::vector<ComplexD>> gammas,
                               std::vector<std::vector<ComplexD>> hyperplanes, std::uint64_t seed)
    : base_(std::move(base)), gammas_(std::move(gammas)), hyperplanes_(std::move(hyperplanes)), seed_(seed)
{
    if (!base_.is_square()) throw std::invalid_argument("EmbeddedSystem: base system must be square");
    if (gammas_.size() != base_.size()) throw std::invalid_argument("EmbeddedSystem: one gamma row per equation");
    for (const auto& g : gammas_)
        if (g.size() != hyperplanes_.size()) throw std::invalid_argument("EmbeddedSystem: one gamma per slack");
    for (const auto& h : hyperplanes_)
        if (h.size() != base_.nvars() + 1) throw std::invalid_argument("EmbeddedSystem: hyperplane needs n+1 coefficients");
}

PolySystem<double> EmbeddedSystem::system() const
{
    const std::size_t total = total_vars();
    if (k() == 0) return base_;
    std::vector<std::string> names = base_.names();
    for (std::size_t j = 0; j < k(); ++j) names.push_back("z" + std::to_string(j + 1));
    std::vector<Poly> polys;
    polys.reserve(total);
    for (std::size_t i = 0; i < n(); ++i) {
        std::vector<Term<double>> terms;
        for (const auto& t : base_[i].terms()) {
            Exponents e = t.exponents;
            e.resize(total, 0);
            terms.push_back({std::move(e), t.coefficient});
        }
        for (std::size_t j = 0; j < k(); ++j) {
            Exponents e(total, 0);
            e[n() + j] = 1;
            terms.push_back({std::move(e), gammas_[i][j]});
        }
        polys.emplace_back(total, std::move(terms));
    }
    for (std::size_t j = 0; j < k(); ++j) {
        std::vector<Term<double>> terms{{Exponents(total, 0), hyperplanes_[j][0]}};
        for (std::size_t v = 0; v < n(); ++v) {
            Exponents e(total, 0);
            e[v] = 1;
            terms.push_back({std::move(e), hyperplanes_[j][v + 1]});
        }
        Exponents ez(total, 0);
        ez[n() + j] = 1;
        terms.push_back({std::move(ez), ComplexD(1.0)});
        polys.emplace_back(total, std::move(terms));
    }
    return PolySystem<double>(total, std::move(polys), std::move(names));
}

EmbeddedSystem EmbeddedSystem::lowered() const
{
    if (k() == 0) throw std::invalid_argument("lowered: embedding has no slack variable");
    auto g = gammas_;
    for (auto& row : g) row.pop_back();
    auto h = hyperplanes_;
    h.pop_back();
    return EmbeddedSystem(base_, std::move(g), std::move(h), seed_);
}

EmbeddedSystem EmbeddedSystem::with_constants(const std::vector<ComplexD>& c0) const
{
    if (c0.size() != k()) throw std::invalid_argument("with_constants: one constant per hyperplane");
    auto h = hyperplanes_;
    for (std::size_t j = 0; j < k(); ++j) h[j][0] = c0[j];
    return EmbeddedSystem(base_, gammas_, std::move(h), seed_);
}

PolySystem<double> EmbeddedSystem::strip() const
{
    PolySystem<double> full = system();
    std::vector<Poly> polys;
    for (std::size_t i = 0; i < n(); ++i) {
        std::vector<Term<double>> terms;
        for (const auto& t : full[i].terms()) {
            bool has_slack = false;
            for (std::size_t j = n(); j < total_vars(); ++j) has_slack = has_slack || t.exponents[j] != 0;
            if (has_slack) continue;
            Exponents e(t.exponents.begin(), t.exponents.begin() + static_cast<std::ptrdiff_t>(n()));
            terms.push_back({std::move(e), t.coefficient});
        }
        polys.emplace_back(n(), std::move(terms));
    }
    return PolySystem<double>(n(), std::move(polys), base_.names());
}

EmbeddedSystem embed(const PolySystem<double>& f, std::size_t k, std::uint64_t seed)
{
    if (!f.is_square()) throw std::invalid_argument("embed: system must be square");
    if (k > f.nvars()) throw std::invalid_argument("embed: k exceeds the number of variables");
    Rng rng = Rng(seed).split(Stream::embedding);
    std::vector<std::vector<ComplexD>> gammas(f.size(), std::vector<ComplexD>(k));
    for (auto& row : gammas)
        for (auto& g : row) g = rng.random_constant();
    std::vector<std::vector<ComplexD>> hyperplanes(k, std::vector<ComplexD>(f.nvars() + 1));
    for (auto& h : hyperplanes)
        for (auto& c : h) c = rng.random_constant();
    return EmbeddedSystem(f, std::move(gammas), std::move(hyperplanes), seed);
}

PolySystem<double> slice_to_zero(const EmbeddedSystem& e)
{
    if (e.k() == 0) throw std::invalid_argument("slice_to_zero: embedding has no slack variable");
    const std::size_t n = e.n();
    std::vector<Poly> polys = e.base().polys();
    for (const auto& h : e.hyperplanes()) {
        std::vector<Term<double>> terms{{Exponents(n, 0), h[0]}};
        for (std::size_t v = 0; v < n; ++v) {
            Exponents ex(n, 0);
            ex[v] = 1;
            terms.push_back({std::move(ex), h[v + 1]});
        }
        polys.emplace_back(n, std::move(terms));
    }
    return PolySystem<double>(n, std::move(polys), e.base().names());
}

} // namespace nid
