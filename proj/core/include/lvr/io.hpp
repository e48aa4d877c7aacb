#pragma once

#include <iosfwd>
#include <string>

#include "lvr/decomposition.hpp"
#include "lvr/gbm.hpp"
#include "lvr/multidim.hpp"

namespace lvr {

// PricePath CSV: header "t,price", one row per grid point, 17 significant
// digits so emitted paths re-ingest bit-exactly.
void write_price_path_csv(std::ostream& os, const PricePath& path);
void write_price_path_csv(const std::string& file, const PricePath& path);

// Parses "t,price" CSV.  ParseError carries the offending line number;
// ValidationError flags non-increasing times or non-positive prices.
PricePath read_price_path_csv(std::istream& is);
PricePath read_price_path_csv(const std::string& file);

// Decomposition CSV: t,V,R,LVR,ARB[,LVB_<label>...].
void write_decomposition_csv(std::ostream& os, const DecompositionReport& report);
void write_decomposition_csv(const std::string& file,
                             const DecompositionReport& report);

// Multi-asset CSV: t,price_1..price_n,V,R,LVR,ARB.
void write_decomposition_md_csv(std::ostream& os, const MultiPricePath& path,
                                const DecompositionReportMd& report);
void write_decomposition_md_csv(const std::string& file, const MultiPricePath& path,
                                const DecompositionReportMd& report);

}  // namespace lvr
