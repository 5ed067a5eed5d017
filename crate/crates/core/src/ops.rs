/// Counts logical basic operations (threshold comparisons and edge
/// operations) so growth rates can be measured independently of the machine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    /// Threshold comparisons made while building the (hyper)graph.
    pub construction: u64,
    /// Edge breaks during ordering plus edge checks during coloring.
    pub coloring: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.construction + self.coloring
    }
}
