#pragma once

#include "endslab/errors.hpp"
#include "endslab/group_spec.hpp"
#include "endslab/group.hpp"
#include "endslab/cayley.hpp"
#include "endslab/union_find.hpp"
#include "endslab/ends.hpp"
#include "endslab/gl_partition.hpp"
#include "endslab/classifiers.hpp"
#include "endslab/report.hpp"
