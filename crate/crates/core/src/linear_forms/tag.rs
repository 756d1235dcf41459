use std::fmt;

/// An unknown in a linear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnknownTag {
    /// Q_{i,j}.
    Point(i64, i64),
    /// Q_{-,i}(x): walks ending on y = i. LineY(0) is Q(x, 0).
    LineY(i64),
    /// Q_{i,-}(x): walks ending on x = i, x marking the height. LineX(0) is Q(0, x).
    LineX(i64),
    /// Q^d_j(x̄): walks ending on y − x = j.
    Diag(i64),
    /// Positive part of the known right-hand side series of a full-orbit sum.
    Theta,
    /// Positive part of its Q(0,0) coefficient, standing for that product.
    Theta00,
}

impl UnknownTag {
    pub fn is_point(&self) -> bool {
        matches!(self, UnknownTag::Point(..))
    }

    pub fn is_function(&self) -> bool {
        matches!(self, UnknownTag::LineY(_) | UnknownTag::LineX(_) | UnknownTag::Diag(_))
    }

    /// +1: only nonnegative x powers; −1: only nonpositive; 0: scalar.
    pub fn support(&self) -> i64 {
        match self {
            UnknownTag::LineY(_) | UnknownTag::LineX(_) => 1,
            UnknownTag::Diag(_) => -1,
            _ => 0,
        }
    }

    /// The point carrying the x^{±m} coefficient of a function tag.
    pub fn point_at(&self, m: i64) -> Option<UnknownTag> {
        match *self {
            UnknownTag::LineY(i) => Some(UnknownTag::Point(m, i)),
            UnknownTag::LineX(i) => Some(UnknownTag::Point(i, m)),
            UnknownTag::Diag(j) => Some(UnknownTag::Point(m, m + j)),
            _ => None,
        }
    }

    /// Tags that denote the zero function.
    pub fn is_trivially_zero(&self) -> bool {
        match *self {
            UnknownTag::Point(i, j) => i < 0 || j < 0,
            UnknownTag::LineY(i) | UnknownTag::LineX(i) => i < 0,
            _ => false,
        }
    }
}

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownTag::Point(i, j) => write!(f, "Q_{{{i},{j}}}"),
            UnknownTag::LineY(0) => write!(f, "Q(x,0)"),
            UnknownTag::LineX(0) => write!(f, "Q(0,x)"),
            UnknownTag::LineY(i) => write!(f, "Q_{{-,{i}}}(x)"),
            UnknownTag::LineX(i) => write!(f, "Q_{{{i},-}}(x)"),
            UnknownTag::Diag(j) => write!(f, "Q^d_{j}(x̄)"),
            UnknownTag::Theta => write!(f, "θ"),
            UnknownTag::Theta00 => write!(f, "θ00·Q(0,0)"),
        }
    }
}
