"""Graphical count models on decomposable graphs, with Bayesian structure search."""
from .bayes import (
    Observations,
    dirnm_log_pmf,
    idirmult_log_pmf,
    log_marginal_likelihood,
    posterior_update,
    read_observations,
    write_observations,
)
from .graph import (
    DecompStructure,
    GraphError,
    MoralDag,
    NotDecomposableError,
    UndirectedGraph,
    build_moral_dag,
    canonical_dag,
    complete_graph,
    dag_from_arrows,
    decompose,
    empty_graph,
    enumerate_moral_dags,
    is_decomposable,
    path_graph,
    read_graph,
    star_graph,
)
from .hypergeom import hyp2f1
from .models import (
    MultParams,
    NmParams,
    bivariate_log_pmf,
    clique_marginal_params,
    log_coeff_C,
    log_coeff_c,
    log_mgf,
    mult_log_pmf,
    mult_sample,
    nm_log_pmf,
    nm_sample,
)
from .polynomials import eval_Delta, eval_delta, in_M_G, u_coords, w_coords, x_from_u, y_from_w
from .priors import DirParams, IDirParams, dir_clique_project, dir_log_pdf, dir_sample, idir_log_pdf, idir_sample, log_K, log_k
from .select import ChainConfig, ChainTrace, exact_posterior, log_bayes_factor, mh_step, propose, run_chain

__version__ = "0.1.0"
