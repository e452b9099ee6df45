#include "horolab/sequences.hpp"

#include <cmath>
#include <mutex>

#include "horolab/error.hpp"

namespace horolab {

void validate(const SequenceSpec& spec) {
    require(spec.n_max <= 1000000000ULL, "sequence n_max must be <= 1e9");
    if (const auto* p = std::get_if<PowerSparse>(&spec.kind)) {
        require(p->c > 0, "PowerSparse needs c > 0");
        require(p->gamma > 0 && p->gamma < 1, "PowerSparse needs 0 < gamma < 1");
    } else if (const auto* s = std::get_if<Squares>(&spec.kind)) {
        require(s->alpha.value() > 0, "Squares needs alpha > 0");
    } else {
        const auto& a = std::get<AlmostPrimes>(spec.kind);
        require(a.L >= 1, "AlmostPrimes needs L >= 1");
        require(a.c > 0, "AlmostPrimes needs c > 0");
    }
}

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit), composite_(limit + 1, false) {
    composite_[0] = true;
    if (limit >= 1) composite_[1] = true;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (!composite_[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) composite_[j] = true;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!composite_[i]) primes_.push_back(static_cast<std::uint32_t>(i));
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    require(n <= limit_, "is_prime beyond table limit");
    return !composite_[n];
}

std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const PrimeTable> table;
    std::lock_guard<std::mutex> lock(mu);
    if (!table || table->limit() < limit) {
        std::uint64_t grown = table ? std::max(limit, 2 * table->limit()) : std::max<std::uint64_t>(limit, 1 << 16);
        table = std::make_shared<const PrimeTable>(grown);
    }
    return table;
}

OmegaSieve::OmegaSieve(std::uint64_t n_max) : omega_(n_max + 1, 0) {
    // A still-zero entry at p >= 2 means no smaller prime divides p.
    for (std::uint64_t p = 2; p <= n_max; ++p) {
        if (omega_[p] != 0) continue;
        for (std::uint64_t pk = p; pk <= n_max; pk *= p) {
            for (std::uint64_t m = pk; m <= n_max; m += pk) ++omega_[m];
            if (pk > n_max / p) break;
        }
    }
}

std::vector<std::uint64_t> OmegaSieve::almost_primes(unsigned L) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n < omega_.size(); ++n)
        if (omega_[n] <= L) out.push_back(n);
    return out;
}

TimeStream::TimeStream(const SequenceSpec& spec) : spec_(spec) {
    validate(spec_);
    if (std::holds_alternative<AlmostPrimes>(spec_.kind)) omega_ = std::make_shared<const OmegaSieve>(spec_.n_max);
}

std::optional<TimeSample> TimeStream::next() {
    while (n_ < spec_.n_max) {
        const std::uint64_t n = ++n_;
        if (const auto* p = std::get_if<PowerSparse>(&spec_.kind)) return TimeSample{n, power_time(p->c, p->gamma, n)};
        if (const auto* s = std::get_if<Squares>(&spec_.kind)) {
            const double nd = static_cast<double>(n);
            double hi, lo;
            two_prod(s->alpha.hi, nd * nd, hi, lo);
            return TimeSample{n, hi + (lo + s->alpha.lo * nd * nd)};
        }
        const auto& a = std::get<AlmostPrimes>(spec_.kind);
        if (omega_->omega(n) <= a.L) return TimeSample{n, a.c * static_cast<double>(n)};
    }
    return std::nullopt;
}

std::vector<double> gen_times(const SequenceSpec& spec) {
    std::vector<double> out;
    TimeStream ts(spec);
    while (auto s = ts.next()) out.push_back(s->t);
    return out;
}

Factorization factorize(std::uint64_t n) {
    if (n == 0) throw PreconditionViolated("factorize needs n >= 1");
    if (n > kFactorizeMax) throw FactorizationTooLarge(std::to_string(n) + " exceeds 1e12");
    Factorization f;
    f.n = n;
    auto table = shared_primes(1000000);
    std::uint64_t m = n;
    for (std::uint32_t p : table->primes()) {
        const std::uint64_t pp = p;
        if (pp * pp > m) break;
        while (m % pp == 0) {
            f.factors.push_back(pp);
            m /= pp;
        }
    }
    if (m > 1) f.factors.push_back(m);  // remaining cofactor has no factor <= sqrt, so it is prime
    f.omega_big = static_cast<unsigned>(f.factors.size());
    return f;
}

std::vector<std::uint64_t> almost_primes(unsigned L, std::uint64_t n_max) { return OmegaSieve(n_max).almost_primes(L); }

std::vector<std::uint8_t> rough_mask(double z, std::uint64_t n_max) {
    require(z <= 1e6, "rough_numbers needs z <= 1e6");
    std::vector<std::uint8_t> mask(n_max + 1, 1);
    mask[0] = 0;
    if (z <= 2) return mask;
    const auto zl = static_cast<std::uint64_t>(std::ceil(z));  // primes p < z
    auto table = shared_primes(zl);
    for (std::uint32_t p : table->primes()) {
        if (static_cast<double>(p) >= z) break;
        for (std::uint64_t m = p; m <= n_max; m += p) mask[m] = 0;
    }
    return mask;
}

std::vector<std::uint64_t> rough_numbers(double z, std::uint64_t n_max) {
    const auto mask = rough_mask(z, n_max);
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= n_max; ++n)
        if (mask[n]) out.push_back(n);
    return out;
}

} // namespace horolab
