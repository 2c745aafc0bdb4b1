// Convenience umbrella header.
#pragma once

#include "splitms/beliefs.hpp"
#include "splitms/comptree.hpp"
#include "splitms/covers.hpp"
#include "splitms/engine.hpp"
#include "splitms/factor_graph.hpp"
#include "splitms/io.hpp"
#include "splitms/messages.hpp"
#include "splitms/oracle.hpp"
#include "splitms/pairwise.hpp"
#include "splitms/params.hpp"
