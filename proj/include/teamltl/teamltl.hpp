// ============================================================================
// teamltl.hpp -- umbrella header: the whole toolkit in one include
// ============================================================================
#pragma once

#include "buchi.hpp"
#include "decide.hpp"
#include "errors.hpp"
#include "eval_ltl.hpp"
#include "eval_team.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "limits.hpp"
#include "model_check.hpp"
#include "normal_form.hpp"
#include "syntax.hpp"
#include "teamctl.hpp"
#include "trace.hpp"
