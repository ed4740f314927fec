#include "sllm/linear_map.hpp"

#include <stdexcept>
#include <string>

#include "store.hpp"

namespace sllm {

LinearMap::LinearMap(std::vector<SpaceShape> domain, SpaceShape codomain, Body body)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), body_(std::move(body)) {}

int LinearMap::run(detail::Store& store, const std::vector<int>& axes) const {
    if (axes.size() != domain_.size()) {
        throw std::logic_error("map expects " + std::to_string(domain_.size()) + " factors, got " +
                               std::to_string(axes.size()));
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (store.dim(axes[i]) != domain_[i].total_dim()) {
            throw std::logic_error("factor " + std::to_string(i) + " has dimension " +
                                   std::to_string(store.dim(axes[i])) + ", map expects " + format_shape(domain_[i]));
        }
    }
    int r = body_(store, axes);
    if (store.dim(r) != codomain_.total_dim()) {
        throw std::logic_error("map produced dimension " + std::to_string(store.dim(r)) + ", expected " +
                               format_shape(codomain_));
    }
    return r;
}

LinearMap identity_map(const SpaceShape& shape) {
    return LinearMap({shape}, shape, [](detail::Store&, const std::vector<int>& ctx) { return ctx[0]; });
}

LinearMap matrix_map(const SpaceShape& domain, const SpaceShape& codomain, std::vector<double> matrix) {
    const std::size_t rows = codomain.total_dim();
    if (matrix.size() != rows * domain.total_dim()) {
        throw std::invalid_argument("matrix has " + std::to_string(matrix.size()) + " entries, expected " +
                                    std::to_string(rows) + " x " + std::to_string(domain.total_dim()));
    }
    return LinearMap({domain}, codomain, [m = std::move(matrix), rows](detail::Store& st, const std::vector<int>& ctx) {
        return st.apply_matrix(ctx[0], m, rows);
    });
}

std::vector<double> matrix_of(const LinearMap& m) {
    detail::Store st;
    std::vector<int> duals, primals;
    for (const SpaceShape& f : m.domain_factors()) {
        auto [d, p] = st.identity(f.total_dim());
        duals.push_back(d);
        primals.push_back(p);
    }
    int r = m.run(st, primals);
    std::vector<int> order{r};
    order.insert(order.end(), duals.begin(), duals.end());
    return st.extract(order);
}

LinearMap compose(const LinearMap& g, const LinearMap& f) {
    if (g.domain_factors().size() != 1 || g.domain_factors()[0] != f.codomain()) {
        throw std::invalid_argument("compose: " + format_shape(g.domain()) + " does not match " +
                                    format_shape(f.codomain()));
    }
    return LinearMap(f.domain_factors(), g.codomain(), [g, f](detail::Store& st, const std::vector<int>& ctx) {
        return g.run(st, {f.run(st, ctx)});
    });
}

LinearMap fock_map(const LinearMap& f, int k0) {
    if (f.domain_factors().size() != 1) throw std::invalid_argument("fock_map expects a map with one domain factor");
    if (k0 < 0) throw std::invalid_argument("k0 must be nonnegative");
    SpaceShape from = SpaceShape::fock(f.domain_factors()[0], k0);
    SpaceShape to = SpaceShape::fock(f.codomain(), k0);
    const std::size_t rows = to.total_dim(), cols = from.total_dim();
    const std::size_t w = f.codomain().total_dim(), v = f.domain_factors()[0].total_dim();
    const std::vector<double> base = matrix_of(f);

    // Layer i carries base^{⊗i}, built by Kronecker products of index pairs.
    std::vector<double> big(rows * cols, 0.0);
    std::vector<double> layer{1.0};
    std::size_t lr = 1, lc = 1;
    for (int i = 0; i <= k0; ++i) {
        std::size_t ro = to.layer_offset(i), co = from.layer_offset(i);
        for (std::size_t r = 0; r < lr; ++r)
            for (std::size_t c = 0; c < lc; ++c) big[(ro + r) * cols + co + c] = layer[r * lc + c];
        if (i == k0) break;
        std::vector<double> next(lr * w * lc * v, 0.0);
        const std::size_t nc = lc * v;
        for (std::size_t r = 0; r < lr; ++r)
            for (std::size_t c = 0; c < lc; ++c) {
                double x = layer[r * lc + c];
                if (x == 0.0) continue;
                for (std::size_t r2 = 0; r2 < w; ++r2)
                    for (std::size_t c2 = 0; c2 < v; ++c2)
                        next[(r * w + r2) * nc + c * v + c2] = x * base[r2 * v + c2];
            }
        layer = std::move(next);
        lr *= w;
        lc *= v;
    }
    return matrix_map(from, to, std::move(big));
}

LinearMap curry_left(const LinearMap& f) {
    const auto& dom = f.domain_factors();
    if (dom.empty()) throw std::invalid_argument("curry_left needs a domain factor to abstract");
    SpaceShape a = dom.front();
    std::vector<SpaceShape> rest(dom.begin() + 1, dom.end());
    return LinearMap(rest, SpaceShape::tensor(SpaceShape::dual(a), f.codomain()),
                     [f, da = a.total_dim()](detail::Store& st, const std::vector<int>& ctx) {
                         auto [dual, primal] = st.identity(da);
                         std::vector<int> args{primal};
                         args.insert(args.end(), ctx.begin(), ctx.end());
                         return st.join(dual, f.run(st, args));
                     });
}

LinearMap curry_right(const LinearMap& f) {
    const auto& dom = f.domain_factors();
    if (dom.empty()) throw std::invalid_argument("curry_right needs a domain factor to abstract");
    SpaceShape a = dom.back();
    std::vector<SpaceShape> rest(dom.begin(), dom.end() - 1);
    return LinearMap(rest, SpaceShape::tensor(SpaceShape::dual(a), f.codomain()),
                     [f, da = a.total_dim()](detail::Store& st, const std::vector<int>& ctx) {
                         auto [dual, primal] = st.identity(da);
                         std::vector<int> args = ctx;
                         args.push_back(primal);
                         return st.join(dual, f.run(st, args));
                     });
}

TensorValue apply(const LinearMap& m, const TensorValue& t) {
    if (t.shape() != m.domain()) {
        throw std::invalid_argument("input shape " + format_shape(t.shape()) + " does not match domain " +
                                    format_shape(m.domain()));
    }
    detail::Store st;
    std::vector<std::size_t> dims;
    for (const SpaceShape& f : m.domain_factors()) dims.push_back(f.total_dim());
    std::vector<int> axes = st.add(dims, t.data());
    int r = m.run(st, axes);
    return TensorValue(m.codomain(), st.extract({r}));
}

TensorValue apply_product(const LinearMap& m, const std::vector<TensorValue>& factors) {
    const auto& dom = m.domain_factors();
    if (factors.size() != dom.size()) {
        throw std::invalid_argument("map expects " + std::to_string(dom.size()) + " factors, got " +
                                    std::to_string(factors.size()));
    }
    detail::Store st;
    std::vector<int> axes;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].shape() != dom[i]) {
            throw std::invalid_argument("factor " + std::to_string(i) + " has shape " +
                                        format_shape(factors[i].shape()) + ", expected " + format_shape(dom[i]));
        }
        axes.push_back(st.add({dom[i].total_dim()}, factors[i].data())[0]);
    }
    int r = m.run(st, axes);
    return TensorValue(m.codomain(), st.extract({r}));
}

namespace {

std::vector<int> slice(const std::vector<int>& v, std::size_t b, std::size_t e) {
    return {v.begin() + static_cast<std::ptrdiff_t>(b), v.begin() + static_cast<std::ptrdiff_t>(e)};
}

std::vector<int> splice(const std::vector<int>& v, std::size_t b, std::size_t e, const std::vector<int>& mid) {
    std::vector<int> out = slice(v, 0, b);
    out.insert(out.end(), mid.begin(), mid.end());
    out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(e), v.end());
    return out;
}

class Compiler {
public:
    Compiler(const AtomDims& dims, int k0) : dims_(dims), k0_(k0) {}

    LinearMap compile(const Derivation& d) const {
        const Sequent& s = d.conclusion;
        std::vector<SpaceShape> domain;
        for (const Formula& f : s.antecedent) domain.push_back(shape(f));
        SpaceShape codomain = shape(s.succedent);
        const RuleData rd = d.data;

        switch (d.rule) {
        case Rule::Axiom:
            return LinearMap(domain, codomain, [](detail::Store&, const std::vector<int>& ctx) { return ctx[0]; });

        case Rule::LeftDivL:
        case Rule::RightDivL: {
            LinearMap arg = compile(d.premises[0]);
            LinearMap rest = compile(d.premises[1]);
            const Formula& fn = s.antecedent[rd.at];
            const bool left = d.rule == Rule::LeftDivL;
            std::size_t da = shape(left ? fn.left() : fn.right()).total_dim();
            std::size_t db = shape(left ? fn.right() : fn.left()).total_dim();
            return LinearMap(domain, codomain, [=](detail::Store& st, const std::vector<int>& ctx) {
                std::size_t gb = left ? rd.at - rd.length : rd.at + 1;
                std::size_t ge = left ? rd.at : rd.at + 1 + rd.length;
                int a = arg.run(st, slice(ctx, gb, ge));
                auto parts = st.split(ctx[rd.at], {da, db});
                st.contract(a, parts[0]);
                std::size_t lo = left ? gb : rd.at, hi = left ? rd.at + 1 : ge;
                return rest.run(st, splice(ctx, lo, hi, {parts[1]}));
            });
        }
        case Rule::LeftDivR:
            return curry_left(compile(d.premises[0]));
        case Rule::RightDivR:
            return curry_right(compile(d.premises[0]));

        case Rule::ProdL: {
            LinearMap p = compile(d.premises[0]);
            const Formula& f = s.antecedent[rd.at];
            std::vector<std::size_t> parts{shape(f.left()).total_dim(), shape(f.right()).total_dim()};
            return LinearMap(domain, codomain, [=](detail::Store& st, const std::vector<int>& ctx) {
                return p.run(st, splice(ctx, rd.at, rd.at + 1, st.split(ctx[rd.at], parts)));
            });
        }
        case Rule::ProdR: {
            LinearMap l = compile(d.premises[0]);
            LinearMap r = compile(d.premises[1]);
            return LinearMap(domain, codomain, [=](detail::Store& st, const std::vector<int>& ctx) {
                int x = l.run(st, slice(ctx, 0, rd.split));
                int y = r.run(st, slice(ctx, rd.split, ctx.size()));
                return st.join(x, y);
            });
        }

        case Rule::BangL: {
            LinearMap p = compile(d.premises[0]);
            const SpaceShape fock = domain[rd.at];
            const int n = rd.multiplicity;
            std::vector<std::size_t> copies(static_cast<std::size_t>(n), fock.inner().total_dim());
            return LinearMap(domain, codomain, [=](detail::Store& st, const std::vector<int>& ctx) {
                int layer = st.select(ctx[rd.at], fock.layer_offset(n), fock.layer_dim(n));
                return p.run(st, splice(ctx, rd.at, rd.at + 1, st.split(layer, copies)));
            });
        }
        case Rule::BangR: {
            LinearMap f = fock_map(compile(d.premises[0]), k0_);
            return LinearMap(domain, codomain, [f](detail::Store& st, const std::vector<int>& ctx) {
                return f.run(st, ctx);
            });
        }

        case Rule::NablaL:
        case Rule::NablaR: {
            LinearMap p = compile(d.premises[0]);
            return LinearMap(domain, codomain, [p](detail::Store& st, const std::vector<int>& ctx) {
                return p.run(st, ctx);
            });
        }
        case Rule::Perm:
        case Rule::PermPrime: {
            LinearMap p = compile(d.premises[0]);
            return LinearMap(domain, codomain, [=](detail::Store& st, const std::vector<int>& ctx) {
                std::vector<int> moved = ctx;
                int x = moved[rd.at];
                moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(rd.at));
                moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(rd.target), x);
                return p.run(st, moved);
            });
        }
        }
        throw std::logic_error("unknown rule");
    }

private:
    SpaceShape shape(const Formula& f) const { return shape_of(f, dims_, k0_); }

    const AtomDims& dims_;
    int k0_;
};

}  // namespace

LinearMap compile_derivation(const Derivation& d, const AtomDims& dims, const CalculusConfig& cfg) {
    CheckResult check = check_derivation(d, cfg);
    if (!check.ok) throw std::invalid_argument("cannot compile an invalid derivation: " + check.reason);
    return Compiler(dims, cfg.k0).compile(d);
}

}  // namespace sllm
