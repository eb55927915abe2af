//! Theorem proving for the logic of Here-and-There (HT).

pub mod bench;
pub mod conn;
pub mod embed;
pub mod frontend;
pub mod lht;
pub mod lj;
pub mod matrix;
pub mod oracle;
pub mod prefix;
pub mod term;

/// Outcome of a proof attempt.
#[derive(Clone, Debug)]
pub enum Verdict<P> {
    Proved(P),
    /// The formula is not valid; only reported when the search is known to be complete
    /// or a countermodel was found.
    Refuted,
    Timeout,
    /// The search stopped without an answer (resource bound or incomplete search).
    GaveUp,
}

impl<P> Verdict<P> {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted)
    }

    pub fn proof(&self) -> Option<&P> {
        match self {
            Verdict::Proved(p) => Some(p),
            _ => None,
        }
    }
}
