//! Supervised classification and online guessing.

mod hedge;
mod linear;

pub use hedge::{
    hedge_bot_score, hedge_from_text, hedge_init, hedge_select, hedge_to_text, hedge_update, score_table, Arm, HedgeState,
    HedgeStep, RENORMALIZE_ABOVE,
};
pub use linear::{predict_prob, train_linear, LinearConfig, LinearModel};
