"""Inference sidecar: pretrained vision models behind the binary RPC
contract documented at ``schemas/provider_rpc.md`` (repo root).

The web service never links model weights; it calls this process over
gRPC. Deploy it on the GPU box; everything falls back to CPU.
"""

__version__ = "0.1.0"
