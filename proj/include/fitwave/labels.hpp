#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fitwave/moran.hpp"
#include "fitwave/population.hpp"

namespace fitwave {

enum class Band : std::uint8_t { Bottom = 0, Middle = 1, Top = 2 };

// Interval geometry frozen at time 0. All thresholds are multiples of
// W0/32 below the initial maximum, so membership tests are exact integer
// comparisons: f < top0 - (m/32) W0  <=>  32 (top0 - f) > m W0.
struct BandBoundaries {
    std::int64_t top0 = 0;
    std::int64_t w0 = 0;

    // primary bands: bottom on (-inf, top0 - 2/16 W0], middle on
    // (top0 - 2/16 W0, top0 - 1/16 W0], top above.
    Band primary_of(std::int64_t f) const { return band_of(f, 4, 2); }
    // secondary bands: one sub-interval deeper, cut at 3/16 and 2/16.
    Band secondary_of(std::int64_t f) const { return band_of(f, 6, 4); }

    // f strictly below top0 - (num32/32) W0.
    bool below_line(std::int64_t f, std::int64_t num32) const {
        return 32 * (top0 - f) > num32 * w0;
    }

private:
    Band band_of(std::int64_t f, std::int64_t low_cut32, std::int64_t high_cut32) const {
        const std::int64_t d = 32 * (top0 - f);
        if (d >= low_cut32 * w0) return Band::Bottom;
        if (d >= high_cut32 * w0) return Band::Middle;
        return Band::Top;
    }
};

// Sticky flags for the four guard-line events: a middle/top labeled
// individual observed strictly below its guard line at some event time.
struct GuardBreach {
    bool primary_mid = false;   // primary middle below top0 - 5/32 W0
    bool primary_top = false;   // primary top below top0 - 3/32 W0
    bool secondary_mid = false; // secondary middle below top0 - 7/32 W0
    bool secondary_top = false; // secondary top below top0 - 5/32 W0
    bool any() const { return primary_mid || primary_top || secondary_mid || secondary_top; }
};

// Two per-individual labelings with the relabeling dynamics:
//  - beneficial mutations promote bottom->middle and middle->top when the new
//    fitness lands in the next band's interval; deleterious mutations never
//    relabel;
//  - resampling copies both labels from the survivor;
//  - selection: a bottom-labeled individual inherits the survivor's label; a
//    middle-labeled individual replaced by a top-labeled one becomes top;
//    nothing else changes.
class LabelState {
public:
    static LabelState from_population(const Population& pop);

    void apply(const Event& event, const StepInfo& info);

    Band primary(int i) const { return primary_[i]; }
    Band secondary(int i) const { return secondary_[i]; }
    const std::array<int, 3>& primary_tally() const { return tally_; }
    const std::array<int, 3>& secondary_tally() const { return tally2_; }
    const BandBoundaries& boundaries() const { return bounds_; }
    const GuardBreach& breaches() const { return breach_; }

private:
    void set_primary(int i, Band b);
    void set_secondary(int i, Band b);
    void check_guards(int i, std::int64_t f);

    BandBoundaries bounds_;
    std::vector<Band> primary_;
    std::vector<Band> secondary_;
    std::array<int, 3> tally_{};
    std::array<int, 3> tally2_{};
    GuardBreach breach_;
};

} // namespace fitwave
