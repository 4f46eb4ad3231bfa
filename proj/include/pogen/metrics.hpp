#pragma once

#include <cstddef>

namespace pogen
{

constexpr double reduction_ratio( std::size_t removed, std::size_t state_vars )
{
    return state_vars == 0 ? 0.0 : static_cast< double >( removed ) / static_cast< double >( state_vars );
}

// Removed literals relative to a reference optimum; 1 when neither removes
// anything. A zero reference counts as 1 otherwise (free variants may beat
// a fix-mode reference).
constexpr double performance( std::size_t removed, std::size_t optimal )
{
    if ( optimal == 0 )
        return removed == 0 ? 1.0 : static_cast< double >( removed );
    return static_cast< double >( removed ) / static_cast< double >( optimal );
}

} // namespace pogen
