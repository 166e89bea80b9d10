#include "asjet/local.hpp"

namespace asjet {

ReducedForm as_reduce(const LaurentSeries& a) {
    if (!a.valid()) throw InternalError("detached series");
    if (a.prec() < 0)
        throw PrecisionError("reduction needs every negative coefficient certified");
    const Field* f = a.field();
    const int p = int(f->p());

    ReducedForm out;
    out.field = f;
    out.certified_depth = a.val() < 0 ? -a.val() : 0;

    std::map<int, FieldElement> work;
    for (int k = a.val(); k < 0 && k < a.stored_end(); ++k) {
        FieldElement c = a.coeff(k);
        if (!c.is_zero()) work[-k] = c;
    }
    // Fold p-divisible pole depths downward; the deepest first, so each
    // cascade terminates at a prime-to-p depth.
    while (true) {
        int target = 0;
        for (auto it = work.rbegin(); it != work.rend(); ++it) {
            if (it->first % p == 0) {
                target = it->first;
                break;
            }
        }
        if (target == 0) break;
        FieldElement c = work[target];
        work.erase(target);
        int down = target / p;
        FieldElement root = c.pth_root();
        auto it = work.find(down);
        if (it == work.end()) {
            work[down] = root;
        } else {
            it->second = it->second + root;
            if (it->second.is_zero()) work.erase(it);
        }
    }
    out.terms = std::move(work);
    return out;
}

int as_jump(const LaurentSeries& a) { return as_reduce(a).max_jump(); }

}  // namespace asjet
