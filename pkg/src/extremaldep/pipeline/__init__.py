from .heatmap import MetadataError, cell_rgb, render_heatmap
from .io import (
    EmptyJoinError,
    EmptySeriesError,
    PriceFileError,
    PriceSeries,
    ReturnSeries,
    abs_log_returns,
    align_pair,
    every_other_day,
    load_metadata,
    load_prices,
    returns_from_prices,
    write_prices,
)
from .matrix import (
    AssetTail,
    DependenceMatrix,
    PairResult,
    RunConfig,
    asset_tail,
    classify_pair,
    load_matrix,
    matrix_to_json,
    pair_seed,
    run_matrix,
    save_matrix,
)
