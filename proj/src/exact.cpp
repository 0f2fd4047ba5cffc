#include "kostlan/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif
#include <mutex>
#include <optional>
#include <stdexcept>

namespace kostlan {

namespace {

int sgn(const mpz_class& x) { return mpz_sgn(x.get_mpz_t()); }

// Splits a finite nonzero double into an odd-free integer mantissa and a
// binary exponent: x = m * 2^e exactly.
void split_dyadic(double x, mpz_class& mantissa, long& exponent) {
    int e = 0;
    const double frac = std::frexp(x, &e);
    const double scaled = std::ldexp(frac, 53);
    mantissa = mpz_class(scaled);
    exponent = static_cast<long>(e) - 53;
}

mpz_class ipow(const mpz_class& base, unsigned long n) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), n);
    return out;
}

}  // namespace

IntegerPolynomial::IntegerPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

void IntegerPolynomial::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) {
        coeffs_.pop_back();
    }
}

IntegerPolynomial IntegerPolynomial::from_dyadic(std::span<const double> coeffs) {
    std::vector<mpz_class> mant(coeffs.size());
    std::vector<long> expo(coeffs.size(), 0);
    long min_exp = std::numeric_limits<long>::max();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (!std::isfinite(coeffs[k])) {
            throw std::invalid_argument("IntegerPolynomial: non-finite coefficient");
        }
        if (coeffs[k] == 0.0) {
            continue;
        }
        split_dyadic(coeffs[k], mant[k], expo[k]);
        min_exp = std::min(min_exp, expo[k]);
    }
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] != 0.0) {
            mpz_mul_2exp(mant[k].get_mpz_t(), mant[k].get_mpz_t(),
                         static_cast<mp_bitcnt_t>(expo[k] - min_exp));
        }
    }
    return IntegerPolynomial(std::move(mant));
}

IntegerPolynomial IntegerPolynomial::derivative() const {
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<mpz_class> out(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        out[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
    }
    return IntegerPolynomial(std::move(out));
}

int IntegerPolynomial::sign_at_infinity(bool positive) const {
    if (is_zero()) {
        return 0;
    }
    const int s = sgn(leading());
    return (!positive && (degree() & 1)) ? -s : s;
}

int IntegerPolynomial::sign_at(double t) const {
    if (is_zero()) {
        return 0;
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("IntegerPolynomial::sign_at: non-finite point");
    }
    if (t == 0.0) {
        return sgn(coeffs_.front());
    }
    mpz_class m;
    long e = 0;
    split_dyadic(t, m, e);
    mpz_class acc = coeffs_.back();
    if (e >= 0) {
        mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        for (int k = degree() - 1; k >= 0; --k) {
            acc *= m;
            acc += coeffs_[k];
        }
        return sgn(acc);
    }
    // t = m / 2^q: evaluate 2^(q deg) p(t) = sum_k c_k m^k 2^(q (deg - k)).
    const auto q = static_cast<mp_bitcnt_t>(-e);
    mpz_class term;
    for (int k = degree() - 1; k >= 0; --k) {
        acc *= m;
        mpz_mul_2exp(term.get_mpz_t(), coeffs_[k].get_mpz_t(),
                     q * static_cast<mp_bitcnt_t>(degree() - k));
        acc += term;
    }
    return sgn(acc);
}

IntegerPolynomial pseudo_remainder(const IntegerPolynomial& a, const IntegerPolynomial& b) {
    if (b.is_zero()) {
        throw std::invalid_argument("pseudo_remainder: zero divisor");
    }
    const int db = b.degree();
    if (a.degree() < db) {
        // prem with a negative exponent is not defined; callers never need it.
        throw std::invalid_argument("pseudo_remainder: deg a < deg b");
    }
    std::vector<mpz_class> r(a.coeffs().begin(), a.coeffs().end());
    const mpz_class& lb = b.leading();
    int steps_left = a.degree() - db + 1;
    int dr = a.degree();
    mpz_class lr;
    while (dr >= db && dr >= 0) {
        lr = r[dr];
        const int shift = dr - db;
        for (int k = 0; k < dr; ++k) {
            r[k] *= lb;
        }
        for (int k = 0; k < db; ++k) {
            r[k + shift] -= lr * b[k];
        }
        r[dr] = 0;
        --steps_left;
        --dr;
        while (dr >= 0 && sgn(r[dr]) == 0) {
            --dr;
        }
    }
    r.resize(static_cast<std::size_t>(std::max(dr, -1) + 1));
    if (steps_left > 0 && !r.empty()) {
        const mpz_class f = ipow(lb, static_cast<unsigned long>(steps_left));
        for (auto& c : r) {
            c *= f;
        }
    }
    return IntegerPolynomial(std::move(r));
}

namespace {

// Arithmetic modulo primes p < 2^50 held in doubles. The product a*b is split
// exactly into h + l with an FMA; the quotient estimate is off by at most one.
constexpr int kLanes = 8;
constexpr int kPrimeBits = 50;

[[gnu::always_inline]] inline double mod_mul(double a, double b, double p, double pinv) {
    const double h = a * b;
    const double l = std::fma(a, b, -h);
    // Round to nearest integer (|h pinv| < 2^51) without a libm call.
    constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52
    const double q = (h * pinv + kMagic) - kMagic;
    double r = std::fma(-q, p, h) + l;
    r += r < 0.0 ? p : 0.0;
    r -= r >= p ? p : 0.0;
    return r;
}

[[gnu::always_inline]] inline double mod_sub(double a, double b, double p) {
    const double r = a - b;
    return r + (r < 0.0 ? p : 0.0);
}

double mod_pow(double a, std::uint64_t e, double p, double pinv) {
    double result = 1.0;
    while (e) {
        if (e & 1) {
            result = mod_mul(result, a, p, pinv);
        }
        a = mod_mul(a, a, p, pinv);
        e >>= 1;
    }
    return result;
}

// The index-th prime above 2^(kPrimeBits - 1); generated once, shared
// between threads.
std::uint64_t chain_prime(std::size_t index) {
    static std::mutex mu;
    static std::vector<std::uint64_t> primes;
    std::lock_guard<std::mutex> lock(mu);
    mpz_class q = mpz_class(1) << (kPrimeBits - 1);
    if (!primes.empty()) {
        q = mpz_class(static_cast<unsigned long>(primes.back()));
    }
    while (primes.size() <= index) {
        mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
        primes.push_back(q.get_ui());
    }
    return primes[index];
}

double log2_norm(const IntegerPolynomial& p) {
    mpz_class acc = 0;
    for (const auto& c : p.coeffs()) {
        acc += c * c;
    }
    return 0.5 * static_cast<double>(mpz_sizeinbase(acc.get_mpz_t(), 2));
}

#if defined(__AVX2__) && defined(__FMA__)

[[gnu::always_inline]] inline __m256d vmod_mul(__m256d a, __m256d b, __m256d p, __m256d pinv) {
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d h = _mm256_mul_pd(a, b);
    const __m256d l = _mm256_fmsub_pd(a, b, h);
    const __m256d q = _mm256_sub_pd(_mm256_fmadd_pd(h, pinv, magic), magic);
    __m256d r = _mm256_add_pd(_mm256_fnmadd_pd(q, p, h), l);
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), p));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, p, _CMP_GE_OQ), p));
    return r;
}

[[gnu::always_inline]] inline __m256d vmod_sub(__m256d a, __m256d b, __m256d p) {
    const __m256d r = _mm256_sub_pd(a, b);
    return _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), p));
}

// rows[r] <- lb rows[r] - lead sub[r], lane-wise.
void eliminate_rows(double* rows, const double* sub, std::size_t count, const double* lb,
                    const double* lead, const double* pr,
                    const double* pinv) {
    static_assert(kLanes == 8);
    const __m256d p0 = _mm256_loadu_pd(pr), p1 = _mm256_loadu_pd(pr + 4);
    const __m256d i0 = _mm256_loadu_pd(pinv), i1 = _mm256_loadu_pd(pinv + 4);
    const __m256d b0 = _mm256_loadu_pd(lb), b1 = _mm256_loadu_pd(lb + 4);
    const __m256d l0 = _mm256_loadu_pd(lead), l1 = _mm256_loadu_pd(lead + 4);
    for (std::size_t r = 0; r < count; ++r) {
        double* row = rows + r * kLanes;
        const double* sb = sub + r * kLanes;
        const __m256d x0 = vmod_sub(vmod_mul(_mm256_loadu_pd(row), b0, p0, i0),
                              vmod_mul(l0, _mm256_loadu_pd(sb), p0, i0), p0);
        const __m256d x1 = vmod_sub(vmod_mul(_mm256_loadu_pd(row + 4), b1, p1, i1),
                              vmod_mul(l1, _mm256_loadu_pd(sb + 4), p1, i1), p1);
        _mm256_storeu_pd(row, x0);
        _mm256_storeu_pd(row + 4, x1);
    }
}

#else

void eliminate_rows(double* rows, const double* sub, std::size_t count, const double* lb,
                    const double* lead, const double* pr,
                    const double* pinv) {
    for (std::size_t r = 0; r < count; ++r) {
        double* row = rows + r * kLanes;
        const double* sb = sub + r * kLanes;
        for (std::size_t l = 0; l < kLanes; ++l) {
            row[l] = mod_sub(mod_mul(row[l], lb[l], pr[l], pinv[l]),
                             mod_mul(lead[l], sb[l], pr[l], pinv[l]), pr[l]);
        }
    }
}

#endif

// Runs the subresultant PRS of (p, p') modulo kLanes primes at once. For a
// regular chain the PRS reduces to
//     r_{i+1} = prem(r_{i-1}, r_i) / lc(r_{i-1})^2,   r_2 = prem(p, p').
// The divisions are deferred: the loop runs R_{i+1} = prem(R_{i-1}, R_i) and
// tracks R_i = (N_i / D_i) r_i, so that a single inversion per lane at the
// end recovers every lc(r_i). Writes gamma_1..gamma_n = lc(r_1..r_n) per
// lane; ok[l] is false where the chain is irregular modulo that prime.
void chain_leading_batch(const IntegerPolynomial& p, const double* primes,
                         std::vector<double> (&gammas)[kLanes], bool (&ok)[kLanes]) {
    const int n = p.degree();
    const std::size_t W = kLanes;
    const std::size_t len = static_cast<std::size_t>(n) + 1;
    double pr[kLanes];
    double pinv[kLanes];
    std::vector<double> num(len * W, 1.0);
    std::vector<double> den(len * W, 1.0);
    for (std::size_t l = 0; l < W; ++l) {
        pr[l] = primes[l];
        pinv[l] = 1.0 / primes[l];
        ok[l] = true;
        gammas[l].assign(static_cast<std::size_t>(n), 0.0);
    }
    std::vector<double> a(len * W);
    std::vector<double> b(static_cast<std::size_t>(n) * W);
    for (int k = 0; k <= n; ++k) {
        for (std::size_t l = 0; l < W; ++l) {
            a[k * W + l] = static_cast<double>(
                mpz_fdiv_ui(p[k].get_mpz_t(), static_cast<unsigned long>(pr[l])));
        }
    }
    for (int k = 1; k <= n; ++k) {
        for (std::size_t l = 0; l < W; ++l) {
            b[(k - 1) * W + l] = mod_mul(a[k * W + l], static_cast<double>(k), pr[l], pinv[l]);
        }
    }
    for (std::size_t l = 0; l < W; ++l) {
        if (a[n * W + l] == 0.0 || b[(n - 1) * W + l] == 0.0) {
            ok[l] = false;
        }
        gammas[l][0] = b[(n - 1) * W + l];
    }
    double lb[kLanes];
    double lead[kLanes];
    for (int m = n - 1; m >= 1; --m) {
        const std::size_t i = static_cast<std::size_t>(n - m);  // computing R_{i+1}
        double* A = a.data();
        const double* B = b.data();
        for (std::size_t l = 0; l < W; ++l) {
            lb[l] = B[m * W + l];
            lead[l] = A[(m + 1) * W + l];
            // N_{i+1} = N_i^2 lc(R_{i-1})^2 D_{i-1},  D_{i+1} = D_i^2 N_{i-1}
            // (no lc factor at i = 1, where nothing is divided out)
            const double ni = num[i * W + l];
            const double di = den[i * W + l];
            double nn = mod_mul(ni, ni, pr[l], pinv[l]);
            if (i > 1) {
                nn = mod_mul(nn, mod_mul(lead[l], lead[l], pr[l], pinv[l]), pr[l], pinv[l]);
            }
            num[(i + 1) * W + l] = mod_mul(nn, den[(i - 1) * W + l], pr[l], pinv[l]);
            den[(i + 1) * W + l] =
                mod_mul(mod_mul(di, di, pr[l], pinv[l]), num[(i - 1) * W + l], pr[l], pinv[l]);
        }
        // a <- lb a - lead x b, then the same on degree m.
        for (std::size_t l = 0; l < W; ++l) {
            A[l] = mod_mul(A[l], lb[l], pr[l], pinv[l]);
        }
        eliminate_rows(A + W, B, static_cast<std::size_t>(m), lb, lead, pr, pinv);
        for (std::size_t l = 0; l < W; ++l) {
            lead[l] = A[m * W + l];
        }
        eliminate_rows(A, B, static_cast<std::size_t>(m), lb, lead, pr, pinv);
        for (std::size_t l = 0; l < W; ++l) {
            const double g = A[(m - 1) * W + l];
            if (g == 0.0) {
                ok[l] = false;
            }
            gammas[l][i] = g;
        }
        a.resize(static_cast<std::size_t>(m) * W);
        std::swap(a, b);
    }
    // lc(r_k) = lc(R_k) D_k / N_k, k = 2..n; batch inversion of the N_k.
    std::vector<double> prefix(len);
    for (std::size_t l = 0; l < W; ++l) {
        if (!ok[l] || n < 2) {
            continue;
        }
        double acc = 1.0;
        for (int k = 2; k <= n; ++k) {
            prefix[k] = acc;
            acc = mod_mul(acc, num[k * W + l], pr[l], pinv[l]);
        }
        double inv = mod_pow(acc, static_cast<std::uint64_t>(pr[l]) - 2, pr[l], pinv[l]);
        for (int k = n; k >= 2; --k) {
            const double inv_k = mod_mul(inv, prefix[k], pr[l], pinv[l]);
            inv = mod_mul(inv, num[k * W + l], pr[l], pinv[l]);
            const double scale = mod_mul(den[k * W + l], inv_k, pr[l], pinv[l]);
            gammas[l][k - 1] = mod_mul(gammas[l][k - 1], scale, pr[l], pinv[l]);
        }
    }
}

std::optional<std::vector<int>> modular_signs(const IntegerPolynomial& p) {
    const int n = p.degree();
    // gamma_i is a principal subresultant coefficient: a determinant with
    // i - 1 rows of p and i rows of p'. The Hadamard bound at i = n dominates.
    const double bound_bits = (n - 1) * log2_norm(p) + n * log2_norm(p.derivative()) + 2.0;
    const std::size_t needed =
        static_cast<std::size_t>(std::ceil(bound_bits / (kPrimeBits - 1))) + 1;

    std::vector<std::uint64_t> used;
    std::vector<std::vector<double>> residues;
    std::size_t cursor = 0;
    std::size_t failures = 0;
    while (residues.size() < needed) {
        double batch[kLanes];
        for (int l = 0; l < kLanes; ++l) {
            batch[l] = static_cast<double>(chain_prime(cursor++));
        }
        std::vector<double> gammas[kLanes];
        bool ok[kLanes];
        chain_leading_batch(p, batch, gammas, ok);
        for (int l = 0; l < kLanes; ++l) {
            if (!ok[l]) {
                ++failures;
                continue;
            }
            if (residues.size() < needed) {
                used.push_back(static_cast<std::uint64_t>(batch[l]));
                residues.push_back(std::move(gammas[l]));
            }
        }
        // An irregular chain over Z is irregular modulo every prime.
        if (residues.empty() || failures > 64) {
            return std::nullopt;
        }
    }

    // CRT: x = sum_j c_j (M / p_j) with c_j = r_j (M / p_j)^-1 mod p_j,
    // assembled over a product tree. |gamma| < M / 2 by the bound, so the
    // sign is read off the symmetric residue.
    const std::size_t k = used.size();
    std::vector<double> cofactor_inv(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double pj = static_cast<double>(used[j]);
        const double pinv = 1.0 / pj;
        double prod = 1.0;
        for (std::size_t l = 0; l < k; ++l) {
            if (l != j) {
                prod = mod_mul(prod, std::fmod(static_cast<double>(used[l]), pj), pj, pinv);
            }
        }
        cofactor_inv[j] = mod_pow(prod, used[j] - 2, pj, pinv);
    }
    std::vector<std::vector<mpz_class>> tree(1);
    for (std::uint64_t q : used) {
        tree[0].emplace_back(static_cast<unsigned long>(q));
    }
    while (tree.back().size() > 1) {
        const auto& below = tree.back();
        std::vector<mpz_class> above((below.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < below.size(); i += 2) {
            above[i / 2] = below[i] * below[i + 1];
        }
        if (below.size() & 1) {
            above.back() = below.back();
        }
        tree.push_back(std::move(above));
    }
    const mpz_class& modulus = tree.back().front();
    const mpz_class half = modulus / 2;

    std::vector<int> signs(static_cast<std::size_t>(n) + 1);
    signs[0] = mpz_sgn(p.leading().get_mpz_t());
    std::vector<mpz_class> x(k);
    for (int i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double pj = static_cast<double>(used[j]);
            x[j] = static_cast<unsigned long>(
                mod_mul(residues[j][i - 1], cofactor_inv[j], pj, 1.0 / pj));
        }
        std::size_t len = k;
        for (std::size_t level = 0; len > 1; ++level) {
            const auto& m = tree[level];
            std::size_t out = 0;
            for (std::size_t a = 0; a + 1 < len; a += 2) {
                x[out] = x[a] * m[a + 1];
                mpz_addmul(x[out].get_mpz_t(), x[a + 1].get_mpz_t(), m[a].get_mpz_t());
                ++out;
            }
            if (len & 1) {
                x[out++] = x[len - 1];
            }
            len = out;
        }
        mpz_mod(x[0].get_mpz_t(), x[0].get_mpz_t(), modulus.get_mpz_t());
        signs[i] = x[0] > half ? -1 : mpz_sgn(x[0].get_mpz_t());
        if (signs[i] == 0) {
            throw std::logic_error("modular chain: vanishing leading coefficient");
        }
    }
    return signs;
}

}  // namespace

std::vector<int> modular_chain_signs(const IntegerPolynomial& p) {
    if (p.degree() < 2) {
        return {};
    }
    auto s = modular_signs(p);
    return s ? std::move(*s) : std::vector<int>{};
}

int count_distinct_real_roots(const IntegerPolynomial& p) {
    if (p.is_zero()) {
        throw std::invalid_argument("count_distinct_real_roots: zero polynomial");
    }
    const int n = p.degree();
    if (n <= 1) {
        return n;
    }
    const auto signs = modular_signs(p);
    if (!signs) {
        return SturmSequence(p).count_real_roots();
    }
    // Regular chain: Sturm member i is eps_i r_i with eps = 1, 1, -1, -1, ...
    // and degree n - i.
    int v_pos = 0;
    int v_neg = 0;
    int last_pos = 0;
    int last_neg = 0;
    for (int i = 0; i <= n; ++i) {
        const int eps = (i % 4 < 2) ? 1 : -1;
        const int s_pos = eps * (*signs)[i];
        const int s_neg = ((n - i) & 1) ? -s_pos : s_pos;
        if (last_pos != 0 && s_pos != last_pos) {
            ++v_pos;
        }
        if (last_neg != 0 && s_neg != last_neg) {
            ++v_neg;
        }
        last_pos = s_pos;
        last_neg = s_neg;
    }
    return v_neg - v_pos;
}

SturmSequence::SturmSequence(const IntegerPolynomial& p) {
    if (p.is_zero()) {
        throw std::invalid_argument("SturmSequence: zero polynomial");
    }
    chain_.push_back(p);
    signs_.push_back(1);
    if (p.degree() == 0) {
        return;
    }
    chain_.push_back(p.derivative());
    signs_.push_back(1);

    // Subresultant PRS (Brown-Collins): r_{i+1} = prem(r_{i-1}, r_i) / beta_i.
    // A Sturm chain needs S_{i+1} = -(positive) rem(S_{i-1}, S_i); with
    // prem = lc(r_i)^(delta_i + 1) rem, the sign bookkeeping is
    // eps_{i+1} = -eps_{i-1} sgn(beta_i) sgn(lc r_i)^(delta_i + 1).
    mpz_class psi(-1);
    int prev_delta = 0;
    mpz_class prev_gamma;
    for (std::size_t i = 1;; ++i) {
        const IntegerPolynomial& rm1 = chain_[i - 1];
        const IntegerPolynomial& ri = chain_[i];
        const int delta = rm1.degree() - ri.degree();
        const mpz_class& gamma = ri.leading();
        mpz_class beta;
        if (i == 1) {
            beta = (delta + 1) % 2 == 0 ? 1 : -1;
        } else {
            // psi_i = (-gamma_{i-1})^{delta_{i-1}} / psi_{i-1}^{delta_{i-1} - 1}
            mpz_class num = ipow(mpz_class(-prev_gamma), static_cast<unsigned long>(prev_delta));
            if (prev_delta >= 1) {
                const mpz_class den = ipow(psi, static_cast<unsigned long>(prev_delta - 1));
                mpz_divexact(psi.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            } else {
                psi = num;
            }
            beta = -prev_gamma * ipow(psi, static_cast<unsigned long>(delta));
        }
        IntegerPolynomial rem = pseudo_remainder(rm1, ri);
        if (rem.is_zero()) {
            break;
        }
        std::vector<mpz_class> next(rem.coeffs().begin(), rem.coeffs().end());
        for (auto& c : next) {
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), beta.get_mpz_t());
        }
        int eps = -signs_[i - 1] * sgn(beta);
        if (sgn(gamma) < 0 && ((delta + 1) & 1)) {
            eps = -eps;
        }
        prev_gamma = gamma;
        prev_delta = delta;
        chain_.emplace_back(std::move(next));
        signs_.push_back(eps);
        if (chain_.back().degree() == 0) {
            break;
        }
    }
}

int SturmSequence::variations(double t) const {
    int count = 0;
    int last = 0;
    for (std::size_t i = 0; i < chain_.size(); ++i) {
        int raw = 0;
        if (std::isinf(t)) {
            raw = chain_[i].sign_at_infinity(t > 0);
        } else {
            raw = chain_[i].sign_at(t);
        }
        const int s = sturm_sign(i, raw);
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++count;
        }
        last = s;
    }
    return count;
}

int SturmSequence::count_roots(double lo, double hi) const {
    if (!(lo < hi)) {
        throw std::invalid_argument("SturmSequence::count_roots: need lo < hi");
    }
    return variations(lo) - variations(hi);
}

bool SturmSequence::squarefree() const { return chain_.back().degree() == 0; }

}  // namespace kostlan
