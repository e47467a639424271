// Real-world: grpc-go#1424. The resolver keeps publishing address updates
// after the balancer stopped receiving; the second send blocks forever.
// Expected: deadlock
package main

import "fmt"

func watcher(updates chan string) {
	updates <- "addr1"
	updates <- "addr2"
}

func main() {
	updates := make(chan string)
	go watcher(updates)
	fmt.Println(<-updates)
}
