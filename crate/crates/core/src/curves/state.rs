use super::CurveError;

/// Vertex state in de Casteljau subdivision: 2 for an endpoint of a
/// control polygon, 1 for an established interior vertex, 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexState(u8);

impl VertexState {
    pub const OTHER: VertexState = VertexState(0);
    pub const INTERIOR: VertexState = VertexState(1);
    pub const ENDPOINT: VertexState = VertexState(2);

    pub fn new(s: u8) -> Result<Self, CurveError> {
        if s <= 2 {
            Ok(VertexState(s))
        } else {
            Err(CurveError::State(s))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// State of a vertex created between two vertices: next to an endpoint or
/// one interior vertex it becomes interior, between two interior vertices
/// it becomes a new endpoint.
pub fn state_transition(left: VertexState, right: VertexState) -> VertexState {
    VertexState(left.0.min(1) + right.0.min(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: u8) -> VertexState {
        VertexState::new(v).unwrap()
    }

    #[test]
    fn transitions() {
        assert_eq!(state_transition(s(2), s(0)), s(1));
        assert_eq!(state_transition(s(1), s(1)), s(2));
        assert_eq!(state_transition(s(0), s(0)), s(0));
        assert_eq!(state_transition(s(2), s(2)), s(2));
        assert_eq!(VertexState::new(3), Err(CurveError::State(3)));
    }
}
