// Pattern P8 (SleepingReceiver): a receiver goroutine waits, then reads
// the channel.
// Expected: no deadlock
package main

import "fmt"
import "time"

func receiver(ch chan int) {
	time.Sleep(100)
	fmt.Println(<-ch)
}

func main() {
	ch := make(chan int)
	go receiver(ch)
	ch <- 5
}
