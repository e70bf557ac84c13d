"""LangGraph pipeline producing the verification report."""
